#include "seal/autodiff.hpp"

#include <cmath>
#include <utility>

namespace seal::ad {

namespace k = seal::kernels;

const Tape::Node& Tape::node(Var v) const {
  if (v.id < 0 || v.id >= static_cast<int>(nodes_.size()))
    throw usage_error("Tape: variable does not belong to this tape");
  return nodes_[v.id];
}

Var Tape::push(Matrix val, bool needs_grad, std::function<void(Tape&)> back) {
  Node n;
  n.val = std::move(val);
  n.requires_grad = needs_grad;
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

void Tape::accum(int id, Matrix g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (!n.has_grad) {
    n.grad = std::move(g);
    n.has_grad = true;
  } else {
    for (size_t i = 0; i < g.size(); ++i) n.grad.data[i] += g.data[i];
  }
}

void Tape::accum_add(int id, const Matrix& g) {
  Node& n = nodes_[id];
  if (!n.requires_grad) return;
  if (!n.has_grad) {
    n.grad = g;
    n.has_grad = true;
  } else {
    for (size_t i = 0; i < g.size(); ++i) n.grad.data[i] += g.data[i];
  }
}

Var Tape::input(Matrix value) { return push(std::move(value), true, nullptr); }

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::constant_ref(const Matrix* value) {
  Node n;
  n.ref = value;
  nodes_.push_back(std::move(n));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = node(a).v();
  const Matrix& bv = node(b).v();
  Matrix y = k::matmul(av, bv);
  const bool ra = node(a).requires_grad, rb = node(b).requires_grad;
  if (!ra && !rb) return push(std::move(y), false, nullptr);
  auto back = [a, b, ra, rb, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    if (ra) t.accum(a.id, k::matmul_a_bt(g, t.nodes_[b.id].v()));
    if (rb) t.accum(b.id, k::matmul_at_b(t.nodes_[a.id].v(), g));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::matmul_symlhs(Var a, Var b) {
  const Matrix& av = node(a).v();
  const Matrix& bv = node(b).v();
  Matrix y = k::matmul(av, bv);
  const bool ra = node(a).requires_grad, rb = node(b).requires_grad;
  if (!ra && !rb) return push(std::move(y), false, nullptr);
  auto back = [a, b, ra, rb, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    if (ra) t.accum(a.id, k::matmul_a_bt(g, t.nodes_[b.id].v()));
    if (rb) t.accum(b.id, k::matmul(t.nodes_[a.id].v(), g));  // aᵀ == a
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::add(Var a, Var b) {
  Matrix y = k::add(node(a).v(), node(b).v());
  const bool ra = node(a).requires_grad, rb = node(b).requires_grad;
  if (!ra && !rb) return push(std::move(y), false, nullptr);
  auto back = [a, b, ra, rb, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    if (ra) t.accum_add(a.id, g);
    if (rb) t.accum_add(b.id, g);
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::sub(Var a, Var b) {
  Matrix y = k::sub(node(a).v(), node(b).v());
  const bool ra = node(a).requires_grad, rb = node(b).requires_grad;
  if (!ra && !rb) return push(std::move(y), false, nullptr);
  auto back = [a, b, ra, rb, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    if (ra) t.accum_add(a.id, g);
    if (rb) t.accum(b.id, k::scale(g, -1.0));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::scale(Var a, double s) {
  Matrix y = k::scale(node(a).v(), s);
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, s, self = static_cast<int>(nodes_.size())](Tape& t) {
    t.accum(a.id, k::scale(t.nodes_[self].grad, s));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::transpose(Var a) {
  Matrix y = k::transpose(node(a).v());
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    t.accum(a.id, k::transpose(t.nodes_[self].grad));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::relu(Var a) {
  Matrix y = k::relu(node(a).v());
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& x = t.nodes_[a.id].v();
    Matrix dx(g.rows, g.cols);
    for (size_t i = 0; i < g.size(); ++i) dx.data[i] = x.data[i] > 0.0 ? g.data[i] : 0.0;
    t.accum(a.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::tanh(Var a) {
  Matrix y = k::tanh(node(a).v());
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& y2 = t.nodes_[self].v();
    Matrix dx(g.rows, g.cols);
    for (size_t i = 0; i < g.size(); ++i)
      dx.data[i] = g.data[i] * (1.0 - y2.data[i] * y2.data[i]);
    t.accum(a.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::softmax_rows(Var a) {
  Matrix y = k::softmax_rows(node(a).v());
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& y2 = t.nodes_[self].v();
    Matrix dx(g.rows, g.cols);
    for (int i = 0; i < g.rows; ++i) {
      const double* gr = g.row_ptr(i);
      const double* yr = y2.row_ptr(i);
      double dot = 0.0;
      for (int j = 0; j < g.cols; ++j) dot += gr[j] * yr[j];
      double* dr = dx.row_ptr(i);
      for (int j = 0; j < g.cols; ++j) dr[j] = yr[j] * (gr[j] - dot);
    }
    t.accum(a.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::reshape(Var a, int rows, int cols) {
  const Matrix& av = node(a).v();
  if (static_cast<size_t>(rows) * cols != av.size())
    throw dim_error("reshape: " + av.shape_str() + " to " + std::to_string(rows) +
                    "x" + std::to_string(cols));
  Matrix y(rows, cols);
  y.data = av.data;
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& x = t.nodes_[a.id].v();
    Matrix dx(x.rows, x.cols);
    dx.data = g.data;
    t.accum(a.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::dropout(Var a, double rate, bool training, Rng& rng) {
  if (!training || rate == 0.0) {
    if (rate < 0.0 || rate >= 1.0)
      throw config_error("dropout: rate must be in [0,1)");
    return a;
  }
  Matrix mask;
  Matrix y = k::dropout(node(a).v(), rate, true, rng, &mask);
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, mask = std::move(mask), self = static_cast<int>(nodes_.size())](Tape& t) {
    t.accum(a.id, k::hadamard(t.nodes_[self].grad, mask));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::select_rows(Var a, std::vector<int> ids) {
  const Matrix& av = node(a).v();
  Matrix y(static_cast<int>(ids.size()), av.cols);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || ids[i] >= av.rows)
      throw index_error("select_rows: row " + std::to_string(ids[i]));
    std::copy(av.row_ptr(ids[i]), av.row_ptr(ids[i]) + av.cols, y.row_ptr(static_cast<int>(i)));
  }
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, ids = std::move(ids), self = static_cast<int>(nodes_.size())](Tape& t) {
    const Matrix& g = t.nodes_[self].grad;
    const Matrix& x = t.nodes_[a.id].v();
    Matrix dx(x.rows, x.cols);
    for (size_t i = 0; i < ids.size(); ++i) {
      const double* gr = g.row_ptr(static_cast<int>(i));
      double* dr = dx.row_ptr(ids[i]);
      for (int j = 0; j < g.cols; ++j) dr[j] += gr[j];
    }
    t.accum(a.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::cross_entropy_rows(Var probs, std::vector<int> rows, std::vector<int> labels) {
  if (rows.size() != labels.size())
    throw dim_error("cross_entropy_rows: row/label count mismatch");
  const Matrix& p = node(probs).v();
  double loss = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= p.rows)
      throw index_error("cross_entropy_rows: row " + std::to_string(rows[i]));
    if (labels[i] < 0 || labels[i] >= p.cols)
      throw index_error("cross_entropy_rows: label " + std::to_string(labels[i]));
    loss += -std::log(std::max(p(rows[i], labels[i]), k::kProbFloor));
  }
  Matrix y(1, 1, loss);
  if (!node(probs).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [probs, rows = std::move(rows), labels = std::move(labels),
               self = static_cast<int>(nodes_.size())](Tape& t) {
    const double g = t.nodes_[self].grad(0, 0);
    const Matrix& p2 = t.nodes_[probs.id].v();
    Matrix dx(p2.rows, p2.cols);
    for (size_t i = 0; i < rows.size(); ++i) {
      const double pi = p2(rows[i], labels[i]);
      if (pi > k::kProbFloor) dx(rows[i], labels[i]) -= g / pi;
    }
    t.accum(probs.id, std::move(dx));
  };
  return push(std::move(y), true, std::move(back));
}

Var Tape::frobenius_sq(Var a) {
  Matrix y(1, 1, k::frobenius_norm_sq(node(a).v()));
  if (!node(a).requires_grad) return push(std::move(y), false, nullptr);
  auto back = [a, self = static_cast<int>(nodes_.size())](Tape& t) {
    const double g = t.nodes_[self].grad(0, 0);
    t.accum(a.id, k::scale(t.nodes_[a.id].v(), 2.0 * g));
  };
  return push(std::move(y), true, std::move(back));
}

const Matrix& Tape::value(Var v) const { return node(v).v(); }

Matrix Tape::grad_of(Var v) const {
  const Node& n = node(v);
  if (n.has_grad) return n.grad;
  const Matrix& val = n.v();
  return Matrix(val.rows, val.cols);
}

void Tape::accumulate_grad(Var v, Matrix& acc) const {
  const Node& n = node(v);
  if (!n.has_grad) return;
  if (!acc.same_shape(n.grad))
    throw dim_error("accumulate_grad: shapes " + acc.shape_str() + " and " +
                    n.grad.shape_str());
  for (size_t i = 0; i < acc.size(); ++i) acc.data[i] += n.grad.data[i];
}

void Tape::backward(Var loss) {
  const Node& ln = node(loss);
  if (consumed_) throw usage_error("Tape: backward already ran on this tape");
  if (ln.v().rows != 1 || ln.v().cols != 1)
    throw usage_error("Tape: backward requires a scalar loss");
  consumed_ = true;
  nodes_[loss.id].grad = Matrix(1, 1, 1.0);
  nodes_[loss.id].has_grad = true;
  for (int i = loss.id; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.has_grad && n.back) n.back(*this);
  }
}

}  // namespace seal::ad

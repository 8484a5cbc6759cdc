#pragma once

#include <functional>
#include <vector>

#include "seal/kernels.hpp"
#include "seal/matrix.hpp"
#include "seal/rng.hpp"

namespace seal::ad {

// Handle into a Tape. Only valid for the tape that produced it.
struct Var {
  int id = -1;
};

// Record of matrix operations supporting one reverse pass. A tape is
// single-owner while recording and is consumed by exactly one backward().
//
// Leaves added via input() receive gradients; constant()/constant_ref()
// leaves do not, and whole subgraphs of constants are skipped during the
// reverse sweep. constant_ref() borrows: the caller keeps the matrix alive
// for the tape's lifetime (used for large shared operands).
class Tape {
 public:
  Var input(Matrix value);
  Var constant(Matrix value);
  Var constant_ref(const Matrix* value);

  Var matmul(Var a, Var b);
  // Same as matmul but requires value(a) symmetric; the reverse step then
  // reuses a in place of its transpose.
  Var matmul_symlhs(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var scale(Var a, double s);
  Var transpose(Var a);
  Var relu(Var a);
  Var tanh(Var a);
  Var softmax_rows(Var a);
  Var reshape(Var a, int rows, int cols);
  Var dropout(Var a, double rate, bool training, Rng& rng);
  Var select_rows(Var a, std::vector<int> ids);
  // Σ over (row, label) pairs of -log(max(P[row,label], kProbFloor)); 1x1.
  Var cross_entropy_rows(Var probs, std::vector<int> rows, std::vector<int> labels);
  Var frobenius_sq(Var a);

  const Matrix& value(Var v) const;
  // Gradient of the loss w.r.t. v; zero matrix if v never influenced it.
  Matrix grad_of(Var v) const;
  // acc += grad(v); no-op if v received none. Avoids copies in batch loops.
  void accumulate_grad(Var v, Matrix& acc) const;

  void backward(Var loss);

  size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix val;
    const Matrix* ref = nullptr;
    Matrix grad;
    bool requires_grad = false;
    bool has_grad = false;
    std::function<void(Tape&)> back;

    const Matrix& v() const { return ref ? *ref : val; }
  };

  const Node& node(Var v) const;
  Var push(Matrix val, bool needs_grad, std::function<void(Tape&)> back);
  void accum(int id, Matrix g);
  void accum_add(int id, const Matrix& g);

  std::vector<Node> nodes_;
  bool consumed_ = false;
};

}  // namespace seal::ad

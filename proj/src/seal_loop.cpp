#include "seal/seal_loop.hpp"

#include <algorithm>
#include <numeric>

#include "seal/kernels.hpp"
#include "seal/metrics.hpp"

namespace seal {

namespace k = seal::kernels;

double supervised_loss(const Matrix& psi, const Matrix& gamma,
                       const std::vector<int>& ids, const std::vector<int>& labels) {
  if (ids.size() != labels.size())
    throw usage_error("supervised_loss: id/label count mismatch");
  double total = 0.0;
  for (size_t i = 0; i < ids.size(); ++i) {
    total += k::cross_entropy(psi.row(ids[i]), labels[i]);
    total += k::cross_entropy(gamma.row(ids[i]), labels[i]);
  }
  return total;
}

double disagreement_loss(const Matrix& psi, const Matrix& gamma,
                         const std::vector<int>& ids) {
  double total = 0.0;
  for (int id : ids) total += k::kl_divergence(gamma.row(id), psi.row(id));
  return total;
}

namespace {

double row_max(const Matrix& m, int row) {
  const double* r = m.row_ptr(row);
  double mx = r[0];
  for (int j = 1; j < m.cols; ++j) mx = std::max(mx, r[j]);
  return mx;
}

int row_argmax(const Matrix& m, int row) {
  const double* r = m.row_ptr(row);
  int best = 0;
  for (int j = 1; j < m.cols; ++j)
    if (r[j] > r[best]) best = j;
  return best;
}

}  // namespace

std::vector<int> select_confident(const Matrix& gamma, const std::vector<int>& pool,
                                  int count) {
  if (count < 0) throw config_error("select_confident: negative count");
  count = std::min<int>(count, static_cast<int>(pool.size()));
  std::vector<std::pair<double, int>> ranked;
  ranked.reserve(pool.size());
  for (int id : pool) ranked.emplace_back(row_max(gamma, id), id);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  std::vector<int> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(ranked[i].second);
  return out;
}

std::vector<int> commit_labels(const Matrix& gamma, const std::vector<int>& ids) {
  std::vector<int> labels;
  labels.reserve(ids.size());
  for (int id : ids) labels.push_back(row_argmax(gamma, id));
  return labels;
}

std::vector<double> disagreement_scores(const Matrix& psi, const Matrix& gamma,
                                        const std::vector<int>& ids) {
  std::vector<double> scores;
  scores.reserve(ids.size());
  for (int id : ids) scores.push_back(k::kl_divergence(gamma.row(id), psi.row(id)));
  return scores;
}

std::vector<int> select_active(const std::vector<double>& scores,
                               const std::vector<int>& ids, int count) {
  if (scores.size() != ids.size())
    throw usage_error("select_active: score/id count mismatch");
  count = std::min<int>(count, static_cast<int>(ids.size()));
  std::vector<int> idx(ids.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return ids[a] < ids[b];
  });
  std::vector<int> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(ids[idx[i]]);
  return out;
}

namespace {

struct RoundModel {
  EmbedResult embed;
  Matrix gamma;
};

// One fit of the full pipeline: (fine-)tune the instance classifier on the
// current labeled set, refresh embeddings, and fit the hierarchical
// classifier on the same labels.
RoundModel fit_round(SageParams& ic, HcParams& hc, const HierarchicalGraph& hg,
                     const NormalizedAdjacency& theta_hat,
                     const std::vector<TrainExample>& train_set,
                     const std::vector<int>& train_ids, const std::vector<int>& train_labels,
                     const TrainConfig& ic_cfg, const HcTrainConfig& hc_cfg, Rng& rng) {
  if (ic_cfg.epochs > 0) train_ic(ic, train_set, ic_cfg, rng);
  RoundModel m;
  m.embed = embed_all(ic, hg);
  if (hc_cfg.epochs > 0)
    train_hc(hc, m.embed.embeddings, theta_hat, train_ids, train_labels, hc_cfg, rng);
  m.gamma = hc_forward(hc, m.embed.embeddings, theta_hat);
  return m;
}

IterationRecord make_record(int round, int committed, int train_size, const RoundModel& m,
                            const std::vector<int>& train_ids,
                            const std::vector<int>& train_labels,
                            const std::vector<int>& xi_pool, const EvalSpec* eval) {
  IterationRecord rec;
  rec.round = round;
  rec.committed = committed;
  rec.train_size = train_size;
  rec.supervised = supervised_loss(m.embed.psi, m.gamma, train_ids, train_labels);
  rec.disagreement = disagreement_loss(m.embed.psi, m.gamma, xi_pool);
  rec.total = total_objective(rec.supervised, rec.disagreement);
  if (eval && !eval->ids.empty()) {
    std::vector<int> pred;
    pred.reserve(eval->ids.size());
    for (int id : eval->ids) pred.push_back(row_argmax(m.gamma, id));
    rec.eval_accuracy = accuracy(pred, eval->truth);
    rec.eval_macro_f1 = macro_f1(pred, eval->truth, m.gamma.cols);
  }
  return rec;
}

std::vector<int> complement_of(const HierarchicalGraph& hg, const std::vector<int>& base) {
  std::vector<char> is_base(hg.count(), 0);
  for (int id : base) is_base.at(id) = 1;
  std::vector<int> pool;
  pool.reserve(hg.count() - base.size());
  for (int i = 0; i < hg.count(); ++i)
    if (!is_base[i]) pool.push_back(i);
  return pool;
}

}  // namespace

SealResult seal_ci(const HierarchicalGraph& hg, const std::vector<int>& base_labeled,
                   const SealConfig& cfg, Rng& rng, const EvalSpec* eval) {
  if (cfg.lambda <= 0) throw config_error("seal_ci: lambda must be positive");
  if (base_labeled.empty()) throw usage_error("seal_ci: no base labels");

  const std::vector<int> pool = complement_of(hg, base_labeled);
  const int unlabeled = static_cast<int>(pool.size());
  const int rounds = (unlabeled + cfg.lambda - 1) / cfg.lambda + 1;

  NormalizedAdjacency theta_hat = normalize_theta(hg);
  const std::vector<TrainExample> base_set = examples_from(hg, base_labeled);

  SealResult res;
  res.ic = SageParams::init(cfg.dims, cfg.dropout_rate, cfg.penalty_coeff, rng);
  res.hc = HcParams::init(cfg.dims.embedding_width(), cfg.hc_hidden, cfg.dims.classes, rng);

  std::vector<TrainExample> train_set = base_set;
  std::vector<int> train_ids = base_labeled;
  std::vector<int> train_labels;
  for (const TrainExample& ex : base_set) train_labels.push_back(ex.label);

  for (int round = 1; round <= rounds; ++round) {
    const bool first = round == 1;
    if (!cfg.hc_warm_start && !first)
      res.hc = HcParams::init(cfg.dims.embedding_width(), cfg.hc_hidden,
                              cfg.dims.classes, rng);
    HcTrainConfig hc_cfg = cfg.hc_train;
    if (cfg.hc_warm_start && !first) hc_cfg.epochs = cfg.hc_warm_epochs;

    RoundModel m = fit_round(res.ic, res.hc, hg, theta_hat, train_set, train_ids,
                             train_labels, first ? cfg.ic_train : cfg.ic_finetune,
                             hc_cfg, rng);

    const int commit_count = std::min(round * cfg.lambda, unlabeled);
    std::vector<int> selected = select_confident(m.gamma, pool, commit_count);
    std::vector<int> pseudo = commit_labels(m.gamma, selected);

    res.history.push_back(make_record(round, commit_count,
                                      static_cast<int>(train_set.size()), m, train_ids,
                                      train_labels, pool, eval));

    // Rebuild from the base set every round: pseudo-labels are re-selected,
    // never accumulated.
    train_set.resize(base_set.size());
    train_ids.resize(base_labeled.size());
    train_labels.resize(base_set.size());
    for (size_t i = 0; i < selected.size(); ++i) {
      train_set.push_back({&hg.instances[selected[i]], pseudo[i]});
      train_ids.push_back(selected[i]);
      train_labels.push_back(pseudo[i]);
    }

    if (round == rounds) {
      res.psi = std::move(m.embed.psi);
      res.gamma = std::move(m.gamma);
    }
  }
  return res;
}

SealResult seal_ai(const HierarchicalGraph& hg, const std::vector<int>& base_labeled,
                   const LabelOracle& oracle, const SealConfig& cfg, Rng& rng,
                   const EvalSpec* eval) {
  if (cfg.per_round <= 0) throw config_error("seal_ai: per_round must be positive");
  if (cfg.budget < 0) throw config_error("seal_ai: negative budget");
  if (base_labeled.empty()) throw usage_error("seal_ai: no base labels");

  std::vector<int> remaining = complement_of(hg, base_labeled);
  NormalizedAdjacency theta_hat = normalize_theta(hg);

  SealResult res;
  res.ic = SageParams::init(cfg.dims, cfg.dropout_rate, cfg.penalty_coeff, rng);
  res.hc = HcParams::init(cfg.dims.embedding_width(), cfg.hc_hidden, cfg.dims.classes, rng);

  std::vector<TrainExample> train_set = examples_from(hg, base_labeled);
  std::vector<int> train_ids = base_labeled;
  std::vector<int> train_labels;
  for (const TrainExample& ex : train_set) train_labels.push_back(ex.label);

  int round = 0;
  while (true) {
    ++round;
    const bool first = round == 1;
    if (!cfg.hc_warm_start && !first)
      res.hc = HcParams::init(cfg.dims.embedding_width(), cfg.hc_hidden,
                              cfg.dims.classes, rng);
    HcTrainConfig hc_cfg = cfg.hc_train;
    if (cfg.hc_warm_start && !first) hc_cfg.epochs = cfg.hc_warm_epochs;
    if (cfg.ai_retrain_ic && !first)
      res.ic = SageParams::init(cfg.dims, cfg.dropout_rate, cfg.penalty_coeff, rng);

    RoundModel m = fit_round(res.ic, res.hc, hg, theta_hat, train_set, train_ids,
                             train_labels,
                             (first || cfg.ai_retrain_ic) ? cfg.ic_train : cfg.ic_finetune,
                             hc_cfg, rng);

    const bool can_annotate =
        static_cast<int>(res.annotated.size()) + cfg.per_round <= cfg.budget &&
        !remaining.empty();

    int committed = 0;
    if (can_annotate) {
      std::vector<double> scores = disagreement_scores(m.embed.psi, m.gamma, remaining);
      std::vector<int> selected = select_active(scores, remaining, cfg.per_round);
      committed = static_cast<int>(selected.size());
      for (int id : selected) {
        int label;
        try {
          label = oracle(id);
        } catch (const std::exception& e) {
          res.aborted = true;
          res.abort_reason = std::string("oracle failed for instance ") +
                             std::to_string(id) + ": " + e.what();
          break;
        }
        if (label < 0 || label >= hg.num_classes)
          throw usage_error("seal_ai: oracle returned label " + std::to_string(label) +
                            " out of range");
        res.annotated.push_back(id);
        train_set.push_back({&hg.instances[id], label});
        train_ids.push_back(id);
        train_labels.push_back(label);
      }
      std::vector<char> taken(hg.count(), 0);
      for (int id : selected) taken[id] = 1;
      std::erase_if(remaining, [&](int id) { return taken[id] == 1; });
    }

    res.history.push_back(make_record(round, committed,
                                      static_cast<int>(train_ids.size()) - committed, m,
                                      train_ids, train_labels, remaining, eval));

    if (!can_annotate || res.aborted) {
      res.psi = std::move(m.embed.psi);
      res.gamma = std::move(m.gamma);
      break;
    }
  }
  return res;
}

std::vector<FprPoint> false_prediction_rate(const Matrix& gamma,
                                            const std::vector<int>& pool,
                                            const LabelOracle& truth,
                                            const std::vector<int>& grid) {
  std::vector<FprPoint> curve;
  curve.reserve(grid.size());
  for (int lambda : grid) {
    std::vector<int> selected = select_confident(gamma, pool, lambda);
    if (selected.empty()) {
      curve.push_back({lambda, 0.0});
      continue;
    }
    int wrong = 0;
    for (int id : selected)
      if (row_argmax(gamma, id) != truth(id)) ++wrong;
    curve.push_back({lambda, static_cast<double>(wrong) / selected.size()});
  }
  return curve;
}

}  // namespace seal

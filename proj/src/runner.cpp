#include "seal/runner.hpp"

#include <fstream>
#include <sstream>

#include "seal/data_io.hpp"
#include "seal/metrics.hpp"

namespace seal::run {

namespace fs = std::filesystem;

const char* method_name(Method m) {
  switch (m) {
    case Method::Sage: return "sage";
    case Method::SealCI: return "seal-ci";
    case Method::SealAI: return "seal-ai";
  }
  return "unknown";
}

Method method_by_name(const std::string& name) {
  if (name == "sage") return Method::Sage;
  if (name == "seal-ci") return Method::SealCI;
  if (name == "seal-ai") return Method::SealAI;
  throw config_error("unknown method '" + name + "' (expected sage, seal-ci or seal-ai)");
}

std::vector<int> predictions_from_rows(const Matrix& probs, const std::vector<int>& ids) {
  std::vector<int> pred;
  pred.reserve(ids.size());
  for (int id : ids) {
    const double* row = probs.row_ptr(id);
    int best = 0;
    for (int j = 1; j < probs.cols; ++j)
      if (row[j] > row[best]) best = j;
    pred.push_back(best);
  }
  return pred;
}

namespace {

std::vector<int> truth_of(const HierarchicalGraph& hg, const std::vector<int>& ids) {
  std::vector<int> truth;
  truth.reserve(ids.size());
  for (int id : ids) {
    if (!hg.instances[id].label)
      throw usage_error("run_method: test instance " + std::to_string(id) +
                        " has no ground-truth label");
    truth.push_back(*hg.instances[id].label);
  }
  return truth;
}

}  // namespace

PipelineResult run_method(Method method, const HierarchicalGraph& hg,
                          const PipelineConfig& cfg) {
  PipelineResult res;
  res.method = method;

  Rng rng(cfg.seed);
  res.data_split = split(hg, cfg.labeled, cfg.test_count, rng);
  const std::vector<int> test_truth = truth_of(hg, res.data_split.test_ids);

  SealConfig seal_cfg = cfg.seal;
  seal_cfg.dims.in_features = hg.instances.front().phi();
  seal_cfg.dims.classes = hg.num_classes;

  EvalSpec eval{res.data_split.test_ids, test_truth};

  switch (method) {
    case Method::Sage: {
      res.ic = SageParams::init(seal_cfg.dims, seal_cfg.dropout_rate,
                                seal_cfg.penalty_coeff, rng);
      TrainReport rep = train_ic(res.ic, examples_from(hg, res.data_split.train_ids),
                                 seal_cfg.ic_train, rng);
      res.ic_epoch_loss = std::move(rep.epoch_loss);
      res.embed = embed_all(res.ic, hg);
      res.psi = res.embed.psi;
      break;
    }
    case Method::SealCI: {
      SealResult sr = seal_ci(hg, res.data_split.train_ids, seal_cfg, rng, &eval);
      res.psi = std::move(sr.psi);
      res.gamma = std::move(sr.gamma);
      res.ic = std::move(sr.ic);
      res.hc = std::move(sr.hc);
      res.history = std::move(sr.history);
      res.embed = embed_all(res.ic, hg);
      break;
    }
    case Method::SealAI: {
      LabelOracle oracle = [&hg](int id) {
        if (!hg.instances[id].label)
          throw usage_error("oracle has no label for instance " + std::to_string(id));
        return *hg.instances[id].label;
      };
      SealResult sr = seal_ai(hg, res.data_split.train_ids, oracle, seal_cfg, rng, &eval);
      res.psi = std::move(sr.psi);
      res.gamma = std::move(sr.gamma);
      res.ic = std::move(sr.ic);
      res.hc = std::move(sr.hc);
      res.history = std::move(sr.history);
      res.annotated = std::move(sr.annotated);
      res.embed = embed_all(res.ic, hg);
      break;
    }
  }

  const std::vector<int> pred_ic = predictions_from_rows(res.psi, res.data_split.test_ids);
  res.test_accuracy_ic = accuracy(pred_ic, test_truth);
  res.test_macro_f1_ic = macro_f1(pred_ic, test_truth, hg.num_classes);
  if (method == Method::Sage) {
    res.test_accuracy = res.test_accuracy_ic;
    res.test_macro_f1 = res.test_macro_f1_ic;
  } else {
    const std::vector<int> pred_hc =
        predictions_from_rows(res.gamma, res.data_split.test_ids);
    res.test_accuracy = accuracy(pred_hc, test_truth);
    res.test_macro_f1 = macro_f1(pred_hc, test_truth, hg.num_classes);
  }
  return res;
}

void write_run_outputs(const PipelineResult& result, const HierarchicalGraph& hg,
                       const fs::path& out_dir) {
  fs::create_directories(out_dir);

  {
    std::ostringstream out;
    out << "method,accuracy,macro_f1,accuracy_ic,macro_f1_ic\n";
    out << method_name(result.method) << ',' << io::fmt_double(result.test_accuracy)
        << ',' << io::fmt_double(result.test_macro_f1) << ','
        << io::fmt_double(result.test_accuracy_ic) << ','
        << io::fmt_double(result.test_macro_f1_ic) << '\n';
    std::ofstream f(out_dir / "metrics.csv", std::ios::binary);
    f << out.str();
  }

  {
    std::ostringstream out;
    out << "id,role\n";
    for (int id : result.data_split.train_ids) out << id << ",train\n";
    for (int id : result.data_split.test_ids) out << id << ",test\n";
    std::ofstream f(out_dir / "split.csv", std::ios::binary);
    f << out.str();
  }

  {
    const Matrix& headline = result.method == Method::Sage ? result.psi : result.gamma;
    std::ostringstream out;
    out << "id,true_class,pred_class\n";
    for (int id : result.data_split.test_ids) {
      const std::vector<int> p = predictions_from_rows(headline, {id});
      out << id << ',' << *hg.instances[id].label << ',' << p[0] << '\n';
    }
    std::ofstream f(out_dir / "predictions.csv", std::ios::binary);
    f << out.str();
  }

  if (!result.history.empty()) io::export_history(result.history, out_dir / "history.csv");

  if (!result.ic_epoch_loss.empty()) {
    std::ostringstream out;
    out << "epoch,loss\n";
    for (size_t e = 0; e < result.ic_epoch_loss.size(); ++e)
      out << e + 1 << ',' << io::fmt_double(result.ic_epoch_loss[e]) << '\n';
    std::ofstream f(out_dir / "train_loss.csv", std::ios::binary);
    f << out.str();
  }

  if (!result.annotated.empty()) {
    std::ostringstream out;
    out << "id\n";
    for (int id : result.annotated) out << id << '\n';
    std::ofstream f(out_dir / "annotated.csv", std::ios::binary);
    f << out.str();
  }

  {
    std::vector<int> truth(hg.count(), -1);
    for (int i = 0; i < hg.count(); ++i)
      if (hg.instances[i].label) truth[i] = *hg.instances[i].label;
    std::vector<int> all_ids(hg.count());
    for (int i = 0; i < hg.count(); ++i) all_ids[i] = i;
    const Matrix& headline =
        result.method == Method::Sage || result.gamma.rows == 0 ? result.psi : result.gamma;
    io::export_embeddings(result.embed.embeddings, result.embed.psi, truth,
                          predictions_from_rows(headline, all_ids),
                          out_dir / "embeddings.csv");
  }

  io::save_params(result.ic,
                  result.hc ? *result.hc
                            : HcParams{.in_dim = result.ic.dims.embedding_width(),
                                       .hidden = 1,
                                       .classes = result.ic.dims.classes,
                                       .w0 = Matrix(result.ic.dims.embedding_width(), 1),
                                       .w1 = Matrix(1, result.ic.dims.classes)},
                  out_dir / "params.txt");
}

}  // namespace seal::run

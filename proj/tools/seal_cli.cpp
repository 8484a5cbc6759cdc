// Batch command-line surface: dataset generation, training, evaluation,
// sweeps and diagnostics. Every command is deterministic under --seed.

#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "seal/config.hpp"
#include "seal/data_io.hpp"
#include "seal/metrics.hpp"
#include "seal/optim.hpp"
#include "seal/runner.hpp"
#include "seal/seal_loop.hpp"
#include "seal/syngen.hpp"

namespace {

using namespace seal;
namespace fs = std::filesystem;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitRuntime = 4;

struct GenOpts {
  std::string out;
  uint64_t seed = 42;
  std::string skeleton = "synthetic";
  std::string edges_file, classes_file;
  double scale = 1.0;
  double mean_degree = 4.0;
  double homophily = 0.81;
  int feature_scheme = 0;
};

struct TrainOpts {
  std::string data, out;
  uint64_t seed = 42;
  std::string profile = "synthetic";
  int labeled = 300;
  int test = 1000;
  int ic_epochs = 200;
  int ic_finetune_epochs = 20;
  int hc_epochs = 100;
  int batch = 32;
  double ic_lr = 0.01;
  double hc_lr = 0.01;
  int lambda = 40;
  int budget = 160;
  int per_round = 10;
  bool hc_warm = false;
  int hc_warm_epochs = 20;
  bool ai_retrain = false;
  // Instance-only training on a four-file benchmark directory.
  std::string tu_dir, tu_name;
  int folds = 10;
};

struct SweepOpts {
  TrainOpts train;
  std::vector<int> sizes = {140, 180, 220, 260, 300};
  std::vector<std::string> methods = {"sage", "seal-ci", "seal-ai"};
  int repeats = 5;
  int ai_base = 140;
  int jobs = 1;
};

struct DiagOpts {
  std::string data, run, out;
  bool gradcheck_only = false;
  std::vector<int> grid = {400, 800, 1200, 1600, 2000};
};

struct ExportOpts {
  std::string run, data, out;
  std::string what = "embeddings";
  int instance = 0;
};

struct EvalOpts {
  std::string pred, data;
};

run::PipelineConfig pipeline_config(const TrainOpts& t) {
  const cfg::Profile& prof = cfg::profile_by_name(t.profile);
  run::PipelineConfig pc;
  pc.seal.dims = prof.dims;
  pc.seal.dropout_rate = prof.dropout_rate;
  pc.seal.penalty_coeff = prof.penalty_coeff;
  pc.seal.hc_hidden = prof.hc_hidden;
  pc.seal.lambda = t.lambda;
  pc.seal.budget = t.budget;
  pc.seal.per_round = t.per_round;
  pc.seal.ic_train = {.epochs = t.ic_epochs, .batch_size = t.batch, .lr = t.ic_lr};
  pc.seal.ic_finetune = {.epochs = t.ic_finetune_epochs, .batch_size = t.batch, .lr = t.ic_lr};
  pc.seal.hc_train = {.epochs = t.hc_epochs, .lr = t.hc_lr};
  pc.seal.hc_warm_start = t.hc_warm;
  pc.seal.hc_warm_epochs = t.hc_warm_epochs;
  pc.seal.ai_retrain_ic = t.ai_retrain;
  pc.labeled = t.labeled;
  pc.test_count = t.test;
  pc.seed = t.seed;
  return pc;
}

void echo_config(const fs::path& out_dir, const std::vector<std::pair<std::string, std::string>>& kv) {
  fs::create_directories(out_dir);
  std::ostringstream out;
  for (const auto& [k, v] : kv) out << k << " = " << v << "\n";
  std::ofstream f(out_dir / "run_config.txt", std::ios::binary);
  f << out.str();
}

std::string stats_table(const HierarchicalGraph& hg) {
  std::ostringstream out;
  out << "family,count,mean_nodes,mean_edges,mean_density\n";
  for (const syngen::FamilyStats& s : syngen::dataset_stats(hg)) {
    out << syngen::family_name(s.kind) << ',' << s.count << ','
        << io::fmt_double(s.mean_nodes) << ',' << io::fmt_double(s.mean_edges) << ','
        << io::fmt_double(s.mean_density) << '\n';
  }
  return out.str();
}

int cmd_gen(const GenOpts& o) {
  syngen::Skeleton sk;
  nlohmann::json gen_meta;
  if (o.skeleton == "citation") {
    if (o.edges_file.empty() || o.classes_file.empty())
      throw config_error("gen: --skeleton citation needs --edges and --classes");
    sk = syngen::load_citation_skeleton(o.edges_file, o.classes_file);
    if (sk.self_loops_dropped > 0)
      std::cerr << "warning: dropped " << sk.self_loops_dropped << " self-loop lines\n";
    gen_meta["skeleton"] = "citation";
    gen_meta["class_names"] = sk.class_names;
  } else if (o.skeleton == "synthetic") {
    std::vector<int> sizes = syngen::default_class_sizes();
    if (o.scale != 1.0) sizes = syngen::scale_class_sizes(sizes, o.scale);
    const auto [p_in, p_out] =
        syngen::skeleton_probabilities(sizes, o.mean_degree, o.homophily);
    Rng sk_rng = derive_rng(o.seed, 0x536b656cULL);
    sk = syngen::synth_skeleton(sizes, p_in, p_out, sk_rng);
    gen_meta["skeleton"] = "synthetic";
    gen_meta["class_sizes"] = sizes;
    gen_meta["mean_degree"] = o.mean_degree;
    gen_meta["homophily"] = o.homophily;
  } else {
    throw config_error("gen: unknown skeleton kind '" + o.skeleton + "'");
  }

  syngen::GenConfig gc;
  gc.seed = o.seed;
  gc.feature_scheme = o.feature_scheme;
  HierarchicalGraph hg = syngen::generate_dataset(sk, gc);

  const ValidationReport vr = validate(hg);
  if (!vr.ok) throw numeric_error("generated dataset failed validation: " + vr.violation);

  nlohmann::json manifest;
  manifest["generator"] = gen_meta;
  manifest["generator"]["seed"] = o.seed;
  manifest["generator"]["feature_scheme"] = o.feature_scheme;
  io::save_dataset(hg, o.out, manifest);

  const std::string table = stats_table(hg);
  std::cout << table;
  std::ofstream f(fs::path(o.out) / "stats.csv", std::ios::binary);
  f << table;
  std::cout << "instances=" << hg.count() << " theta_edges="
            << [&] {
                 long e = 0;
                 for (int i = 0; i < hg.count(); ++i)
                   for (int j = i + 1; j < hg.count(); ++j)
                     if (hg.theta(i, j) != 0.0) ++e;
                 return e;
               }()
            << " out=" << o.out << "\n";
  return 0;
}

int run_train_command(run::Method method, const TrainOpts& t) {
  io::LoadedDataset ds = io::load_dataset(t.data);
  const ValidationReport vr = validate(ds.hg);
  if (!vr.ok) throw format_error("dataset failed validation: " + vr.violation);

  run::PipelineConfig pc = pipeline_config(t);
  run::PipelineResult res = run::run_method(method, ds.hg, pc);

  if (!t.out.empty()) {
    run::write_run_outputs(res, ds.hg, t.out);
    echo_config(t.out, {{"method", run::method_name(method)},
                        {"data", t.data},
                        {"seed", std::to_string(t.seed)},
                        {"profile", t.profile},
                        {"labeled", std::to_string(t.labeled)},
                        {"test", std::to_string(t.test)},
                        {"lambda", std::to_string(t.lambda)},
                        {"budget", std::to_string(t.budget)},
                        {"per_round", std::to_string(t.per_round)},
                        {"ic_epochs", std::to_string(t.ic_epochs)},
                        {"ic_finetune_epochs", std::to_string(t.ic_finetune_epochs)},
                        {"hc_epochs", std::to_string(t.hc_epochs)},
                        {"batch", std::to_string(t.batch)},
                        {"ic_lr", io::fmt_double(t.ic_lr)},
                        {"hc_lr", io::fmt_double(t.hc_lr)},
                        {"hc_warm", t.hc_warm ? "true" : "false"},
                        {"hc_warm_epochs", std::to_string(t.hc_warm_epochs)}});
  }

  std::cout << "method=" << run::method_name(method)
            << " accuracy=" << io::fmt_double(res.test_accuracy)
            << " macro_f1=" << io::fmt_double(res.test_macro_f1)
            << " accuracy_ic=" << io::fmt_double(res.test_accuracy_ic)
            << " macro_f1_ic=" << io::fmt_double(res.test_macro_f1_ic)
            << " rounds=" << res.history.size() << "\n";
  return 0;
}

// Instance-only training with k-fold cross validation on a four-file
// benchmark directory; no hierarchical information involved.
int run_tu_folds(const TrainOpts& t) {
  std::vector<GraphInstance> graphs = io::load_tu_dataset(t.tu_dir, t.tu_name);
  int classes = 0, phi = graphs.empty() ? 0 : graphs.front().phi();
  for (const GraphInstance& g : graphs) classes = std::max(classes, *g.label + 1);
  std::cout << "graphs=" << graphs.size() << " feature_width=" << phi
            << " classes=" << classes << "\n";

  const cfg::Profile& prof = cfg::profile_by_name(t.profile);
  SageDims dims = prof.dims;
  dims.in_features = phi;
  dims.classes = classes;

  Rng rng(t.seed);
  std::vector<int> order(graphs.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  rng.shuffle(order);

  std::vector<double> fold_acc;
  for (int fold = 0; fold < t.folds; ++fold) {
    std::vector<TrainExample> train;
    std::vector<const GraphInstance*> test;
    std::vector<int> truth;
    for (size_t i = 0; i < order.size(); ++i) {
      const GraphInstance& g = graphs[order[i]];
      if (static_cast<int>(i % t.folds) == fold) {
        test.push_back(&g);
        truth.push_back(*g.label);
      } else {
        train.push_back({&g, *g.label});
      }
    }
    SageParams params = SageParams::init(dims, prof.dropout_rate, prof.penalty_coeff, rng);
    train_ic(params, train, {.epochs = t.ic_epochs, .batch_size = t.batch, .lr = t.ic_lr},
             rng);
    std::vector<int> pred;
    pred.reserve(test.size());
    for (const GraphInstance* g : test) {
      SageOutput out = sage_forward(params, normalize_adjacency(g->adjacency),
                                    g->features, false, nullptr);
      int best = 0;
      for (int j = 1; j < out.psi.cols; ++j)
        if (out.psi(0, j) > out.psi(0, best)) best = j;
      pred.push_back(best);
    }
    fold_acc.push_back(accuracy(pred, truth));
    std::cout << "fold=" << fold << " accuracy=" << io::fmt_double(fold_acc.back()) << "\n";
  }
  double mean = 0.0;
  for (double a : fold_acc) mean += a;
  mean /= fold_acc.size();
  std::cout << "mean_accuracy=" << io::fmt_double(mean) << "\n";
  return 0;
}

int cmd_sweep(const SweepOpts& o) {
  io::LoadedDataset ds = io::load_dataset(o.train.data);
  const ValidationReport vr = validate(ds.hg);
  if (!vr.ok) throw format_error("dataset failed validation: " + vr.violation);

  struct Job {
    int size;
    run::Method method;
    uint64_t seed;
  };
  std::vector<Job> jobs;
  for (int size : o.sizes)
    for (const std::string& mname : o.methods) {
      const run::Method m = run::method_by_name(mname);
      for (int rep = 0; rep < o.repeats; ++rep) {
        if (m == run::Method::SealAI && size < o.ai_base)
          throw config_error("sweep: size " + std::to_string(size) +
                             " is below the active-learning base " +
                             std::to_string(o.ai_base));
        jobs.push_back({size, m, o.train.seed + static_cast<uint64_t>(rep)});
      }
    }

  std::vector<double> acc(jobs.size()), f1(jobs.size());
  std::atomic<size_t> next{0};
  const int workers = std::max(1, o.jobs);
  auto worker = [&]() {
    if (workers > 1) omp_set_num_threads(1);
    while (true) {
      const size_t j = next.fetch_add(1);
      if (j >= jobs.size()) break;
      const Job& job = jobs[j];
      TrainOpts t = o.train;
      t.seed = job.seed;
      if (job.method == run::Method::SealAI) {
        t.labeled = o.ai_base;
        t.budget = job.size - o.ai_base;
      } else {
        t.labeled = job.size;
      }
      run::PipelineResult r = run::run_method(job.method, ds.hg, pipeline_config(t));
      acc[j] = r.test_accuracy;
      f1[j] = r.test_macro_f1;
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();

  std::ostringstream runs, means;
  runs << "size,method,seed,accuracy,macro_f1\n";
  means << "size,method,mean_accuracy,mean_macro_f1\n";
  for (int size : o.sizes)
    for (const std::string& mname : o.methods) {
      const run::Method m = run::method_by_name(mname);
      double ma = 0.0, mf = 0.0;
      int count = 0;
      for (size_t j = 0; j < jobs.size(); ++j) {
        if (jobs[j].size != size || jobs[j].method != m) continue;
        runs << size << ',' << mname << ',' << jobs[j].seed << ','
             << io::fmt_double(acc[j]) << ',' << io::fmt_double(f1[j]) << '\n';
        ma += acc[j];
        mf += f1[j];
        ++count;
      }
      means << size << ',' << mname << ',' << io::fmt_double(ma / count) << ','
            << io::fmt_double(mf / count) << '\n';
    }

  std::cout << means.str();
  if (!o.train.out.empty()) {
    fs::create_directories(o.train.out);
    std::ofstream r(fs::path(o.train.out) / "sweep_runs.csv", std::ios::binary);
    r << runs.str();
    std::ofstream m(fs::path(o.train.out) / "sweep.csv", std::ios::binary);
    m << means.str();
  }
  return 0;
}

// Gradient checks on small fixtures, plus the confidence-threshold error
// curve of a trained run when one is supplied.
int cmd_diag(const DiagOpts& o) {
  // Instance-classifier loss gradient vs central differences.
  syngen::GenConfig gc;
  gc.size_min = gc.size_max = 6;
  gc.seed = 7;
  Rng gen_rng = derive_rng(gc.seed, 1);
  GraphInstance inst = syngen::generate_instance(syngen::FamilyKind::ErdosRenyi, gc, gen_rng);
  syngen::assign_features(inst, 0);

  SageDims dims{.in_features = 3, .gcn_hidden = 8, .gcn_out = 4, .att_hidden = 8,
                .att_views = 3, .dense_units = 8, .classes = 7};
  Rng init_rng(11);
  SageParams params = SageParams::init(dims, 0.0, 0.15, init_rng);
  NormalizedAdjacency a_hat = normalize_adjacency(inst.adjacency);

  auto sage_loss_of = [&](const std::vector<Matrix>& ws) {
    SageParams p = params;
    auto ptrs = p.weights();
    for (size_t i = 0; i < ptrs.size(); ++i) *ptrs[i] = ws[i];
    ad::Tape tape;
    detail::SageVars vars = detail::add_sage_params(tape, p, true);
    ad::Var loss =
        detail::sage_instance_loss(tape, vars, p, a_hat.m, inst.features, 2, false, nullptr);
    return tape.value(loss)(0, 0);
  };
  std::vector<Matrix> ws;
  for (const Matrix* w : params.weights()) ws.push_back(*w);
  std::vector<Matrix> analytic;
  {
    ad::Tape tape;
    detail::SageVars vars = detail::add_sage_params(tape, params, true);
    ad::Var loss =
        detail::sage_instance_loss(tape, vars, params, a_hat.m, inst.features, 2, false, nullptr);
    tape.backward(loss);
    for (ad::Var v : vars.list()) analytic.push_back(tape.grad_of(v));
  }
  const double sage_err = finite_diff_check(sage_loss_of, ws, analytic, 1e-5);
  std::cout << "gradcheck_sage_max_rel_err=" << io::fmt_double(sage_err)
            << (sage_err < 1e-4 ? " PASS" : " FAIL") << "\n";

  // Hierarchical-classifier loss gradient on a 5-instance fixture.
  Rng hc_rng(13);
  const int width = dims.embedding_width();
  Matrix emb = kernels::he_normal_init(5, width, hc_rng);
  Matrix theta(5, 5);
  for (int i = 0; i < 5; ++i) {
    theta(i, (i + 1) % 5) = 1.0;
    theta((i + 1) % 5, i) = 1.0;
  }
  NormalizedAdjacency theta_hat = normalize_adjacency(theta);
  HcParams hc = HcParams::init(width, 6, 7, hc_rng);
  const std::vector<int> ids = {0, 2, 4};
  const std::vector<int> labels = {1, 3, 5};
  auto hc_loss_of = [&](const std::vector<Matrix>& ws) {
    HcParams p = hc;
    p.w0 = ws[0];
    p.w1 = ws[1];
    return hc_loss(p, emb, theta_hat, ids, labels);
  };
  std::vector<Matrix> hws = {hc.w0, hc.w1};
  std::vector<Matrix> hanalytic;
  {
    ad::Tape tape;
    detail::HcVars vars = detail::add_hc_params(tape, hc, true);
    ad::Var loss = detail::hc_loss_var(tape, vars, &emb, &theta_hat.m, ids, labels);
    tape.backward(loss);
    hanalytic.push_back(tape.grad_of(vars.w0));
    hanalytic.push_back(tape.grad_of(vars.w1));
  }
  const double hc_err = finite_diff_check(hc_loss_of, hws, hanalytic, 1e-5);
  std::cout << "gradcheck_hc_max_rel_err=" << io::fmt_double(hc_err)
            << (hc_err < 1e-4 ? " PASS" : " FAIL") << "\n";

  if (o.gradcheck_only || o.run.empty()) return 0;

  if (o.data.empty()) throw config_error("diag: --run needs --data");
  io::LoadedDataset ds = io::load_dataset(o.data);
  io::LoadedParams lp = io::load_params(fs::path(o.run) / "params.txt");

  std::ifstream split_file(fs::path(o.run) / "split.csv");
  if (!split_file) throw io_error("diag: missing split.csv in " + o.run);
  std::vector<char> is_train(ds.hg.count(), 0);
  std::string line;
  std::getline(split_file, line);  // header
  while (std::getline(split_file, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    if (line.substr(comma + 1) == "train") is_train.at(std::stoi(line.substr(0, comma))) = 1;
  }
  std::vector<int> pool;
  for (int i = 0; i < ds.hg.count(); ++i)
    if (!is_train[i]) pool.push_back(i);

  EmbedResult em = embed_all(lp.sage, ds.hg);
  NormalizedAdjacency th = normalize_theta(ds.hg);
  Matrix gamma = hc_forward(lp.hc, em.embeddings, th);
  LabelOracle truth = [&](int id) { return *ds.hg.instances[id].label; };
  std::vector<FprPoint> curve = false_prediction_rate(gamma, pool, truth, o.grid);

  std::ostringstream out;
  out << "lambda,false_prediction_rate\n";
  for (const FprPoint& p : curve)
    out << p.lambda << ',' << io::fmt_double(p.rate) << '\n';
  std::cout << out.str();
  if (!o.out.empty()) {
    fs::create_directories(o.out);
    std::ofstream f(fs::path(o.out) / "fpr.csv", std::ios::binary);
    f << out.str();
  }
  return 0;
}

int cmd_eval(const EvalOpts& o) {
  io::LoadedDataset ds = io::load_dataset(o.data);
  std::ifstream in(o.pred);
  if (!in) throw io_error("cannot open " + o.pred);
  std::string line;
  if (!std::getline(in, line) || line != "id,true_class,pred_class")
    throw format_error(o.pred + ": expected header id,true_class,pred_class");
  std::vector<int> pred, truth;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    int id, t, p;
    char c1, c2;
    if (!(ss >> id >> c1 >> t >> c2 >> p) || c1 != ',' || c2 != ',')
      throw format_error(o.pred + ":" + std::to_string(line_no) + ": bad row");
    if (id < 0 || id >= ds.hg.count())
      throw format_error(o.pred + ":" + std::to_string(line_no) + ": id out of range");
    if (!ds.hg.instances[id].label || *ds.hg.instances[id].label != t)
      throw format_error(o.pred + ":" + std::to_string(line_no) +
                         ": true class does not match the dataset");
    pred.push_back(p);
    truth.push_back(t);
  }
  std::cout << "rows=" << pred.size() << " accuracy=" << io::fmt_double(accuracy(pred, truth))
            << " macro_f1=" << io::fmt_double(macro_f1(pred, truth, ds.hg.num_classes))
            << "\n";
  return 0;
}

int cmd_export(const ExportOpts& o) {
  io::LoadedDataset ds = io::load_dataset(o.data);
  io::LoadedParams lp = io::load_params(fs::path(o.run) / "params.txt");
  EmbedResult em = embed_all(lp.sage, ds.hg);
  if (o.what == "embeddings") {
    std::vector<int> truth(ds.hg.count(), -1);
    for (int i = 0; i < ds.hg.count(); ++i)
      if (ds.hg.instances[i].label) truth[i] = *ds.hg.instances[i].label;
    std::vector<int> all_ids(ds.hg.count());
    for (int i = 0; i < ds.hg.count(); ++i) all_ids[i] = i;
    io::export_embeddings(em.embeddings, em.psi, truth,
                          run::predictions_from_rows(em.psi, all_ids), o.out);
  } else if (o.what == "attention") {
    if (o.instance < 0 || o.instance >= ds.hg.count())
      throw config_error("export: --instance out of range");
    io::export_attention(ds.hg.instances[o.instance], em.attention[o.instance], o.out);
  } else {
    throw config_error("export: --what must be embeddings or attention");
  }
  std::cout << "wrote " << o.out << "\n";
  return 0;
}

// Injects config-file entries as options of the chosen subcommand, keeping
// command-line flags authoritative. Unknown keys are rejected.
std::vector<std::string> apply_config_file(CLI::App& app, std::vector<std::string> args) {
  std::string config_path;
  for (size_t i = 0; i + 1 < args.size(); ++i)
    if (args[i] == "--config") config_path = args[i + 1];
  for (const std::string& a : args)
    if (a.rfind("--config=", 0) == 0) config_path = a.substr(9);
  if (config_path.empty()) return args;

  CLI::App* sub = nullptr;
  size_t sub_pos = 0;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i].rfind("--", 0) == 0) {
      ++i;  // skip the value of --config/--<opt> <val> forms conservatively
      continue;
    }
    sub = app.get_subcommand_no_throw(args[i]);
    sub_pos = i;
    break;
  }
  if (sub == nullptr) throw config_error("--config requires a subcommand");

  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg::parse_config_file(config_path)) {
    const std::string flag = "--" + key;
    if (sub->get_option_no_throw(flag) == nullptr)
      throw config_error("config file: unknown key '" + key + "' for subcommand '" +
                         sub->get_name() + "'");
    bool overridden = false;
    for (const std::string& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) overridden = true;
    if (!overridden) injected.push_back(flag + "=" + value);
  }
  args.insert(args.begin() + sub_pos + 1, injected.begin(), injected.end());
  return args;
}

void add_train_options(CLI::App* sub, TrainOpts& t, bool with_data = true) {
  if (with_data) sub->add_option("--data", t.data, "dataset directory")->required();
  sub->add_option("--out", t.out, "output directory");
  sub->add_option("--seed", t.seed, "run seed");
  sub->add_option("--profile", t.profile, "hyperparameter profile (benchmark|synthetic)");
  sub->add_option("--labeled", t.labeled, "labeled training instances");
  sub->add_option("--test", t.test, "test instances");
  sub->add_option("--ic-epochs", t.ic_epochs, "instance classifier epochs");
  sub->add_option("--ic-finetune-epochs", t.ic_finetune_epochs, "fine-tuning epochs per round");
  sub->add_option("--hc-epochs", t.hc_epochs, "hierarchical classifier epochs");
  sub->add_option("--batch", t.batch, "minibatch size");
  sub->add_option("--ic-lr", t.ic_lr, "instance classifier learning rate");
  sub->add_option("--hc-lr", t.hc_lr, "hierarchical classifier learning rate");
  sub->add_option("--lambda", t.lambda, "pseudo-labels per round");
  sub->add_option("--budget", t.budget, "annotation budget");
  sub->add_option("--per-round", t.per_round, "annotations per round");
  sub->add_flag("--hc-warm", t.hc_warm, "keep hierarchical classifier parameters across rounds");
  sub->add_option("--hc-warm-epochs", t.hc_warm_epochs, "per-round epochs when warm");
  sub->add_flag("--ai-retrain", t.ai_retrain, "retrain the instance classifier every active round");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-supervised hierarchical-graph classification"};
  app.require_subcommand(1);

  std::string config_file;
  app.add_option("--config", config_file, "flat key = value config file")
      ->expected(1);

  GenOpts gen;
  CLI::App* sub_gen = app.add_subcommand("gen", "generate the synthetic benchmark dataset");
  sub_gen->add_option("--out", gen.out, "dataset directory")->required();
  sub_gen->add_option("--seed", gen.seed, "generator seed");
  sub_gen->add_option("--skeleton", gen.skeleton, "synthetic|citation");
  sub_gen->add_option("--edges", gen.edges_file, "citation edge file");
  sub_gen->add_option("--classes", gen.classes_file, "citation class file");
  sub_gen->add_option("--scale", gen.scale, "class-size scale factor");
  sub_gen->add_option("--mean-degree", gen.mean_degree, "skeleton mean degree");
  sub_gen->add_option("--homophily", gen.homophily, "fraction of intra-class skeleton edges");
  sub_gen->add_option("--feature-scheme", gen.feature_scheme, "node feature scheme id");

  TrainOpts t_sage, t_ci, t_ai;
  CLI::App* sub_sage = app.add_subcommand("train-sage", "train the instance classifier only");
  add_train_options(sub_sage, t_sage, false);
  sub_sage->add_option("--data", t_sage.data, "dataset directory");
  sub_sage->add_option("--tu", t_sage.tu_dir, "four-file benchmark directory");
  sub_sage->add_option("--tu-name", t_sage.tu_name, "benchmark dataset name");
  sub_sage->add_option("--folds", t_sage.folds, "cross-validation folds for --tu");

  CLI::App* sub_ci = app.add_subcommand("seal-ci", "cautious iterative training");
  add_train_options(sub_ci, t_ci);
  CLI::App* sub_ai = app.add_subcommand("seal-ai", "active iterative training");
  add_train_options(sub_ai, t_ai);

  SweepOpts sweep;
  CLI::App* sub_sweep = app.add_subcommand("sweep", "label-budget sweep over methods");
  add_train_options(sub_sweep, sweep.train);
  sub_sweep->add_option("--sizes", sweep.sizes, "labeled set sizes")->delimiter(',');
  sub_sweep->add_option("--methods", sweep.methods, "methods to run")->delimiter(',');
  sub_sweep->add_option("--repeats", sweep.repeats, "seeds per cell");
  sub_sweep->add_option("--ai-base", sweep.ai_base, "base labels for active learning");
  sub_sweep->add_option("--jobs", sweep.jobs, "parallel workers");

  DiagOpts diag;
  CLI::App* sub_diag = app.add_subcommand("diag", "gradient checks and confidence diagnostics");
  sub_diag->add_option("--data", diag.data, "dataset directory");
  sub_diag->add_option("--run", diag.run, "trained run directory");
  sub_diag->add_option("--out", diag.out, "output directory");
  sub_diag->add_flag("--gradcheck-only", diag.gradcheck_only, "skip the error curve");
  sub_diag->add_option("--grid", diag.grid, "confidence thresholds")->delimiter(',');

  EvalOpts eval;
  CLI::App* sub_eval = app.add_subcommand("eval", "recompute metrics from predictions");
  sub_eval->add_option("--pred", eval.pred, "predictions.csv")->required();
  sub_eval->add_option("--data", eval.data, "dataset directory")->required();

  ExportOpts exp;
  CLI::App* sub_export = app.add_subcommand("export", "re-export artifacts from a run");
  sub_export->add_option("--run", exp.run, "trained run directory")->required();
  sub_export->add_option("--data", exp.data, "dataset directory")->required();
  sub_export->add_option("--what", exp.what, "embeddings|attention");
  sub_export->add_option("--instance", exp.instance, "instance id for attention");
  sub_export->add_option("--out", exp.out, "output file")->required();

  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    args = apply_config_file(app, args);
    std::vector<const char*> cargs = {argv[0]};
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());

    if (sub_gen->parsed()) return cmd_gen(gen);
    if (sub_sage->parsed()) {
      if (!t_sage.tu_dir.empty()) return run_tu_folds(t_sage);
      if (t_sage.data.empty())
        throw config_error("train-sage: need --data or --tu");
      return run_train_command(run::Method::Sage, t_sage);
    }
    if (sub_ci->parsed()) return run_train_command(run::Method::SealCI, t_ci);
    if (sub_ai->parsed()) return run_train_command(run::Method::SealAI, t_ai);
    if (sub_sweep->parsed()) return cmd_sweep(sweep);
    if (sub_diag->parsed()) return cmd_diag(diag);
    if (sub_eval->parsed()) return cmd_eval(eval);
    if (sub_export->parsed()) return cmd_export(exp);
    throw config_error("no subcommand given");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const format_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const io_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

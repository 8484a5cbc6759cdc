#include "seal/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

namespace seal::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_double(double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc())
    throw numeric_error("fmt_double: conversion failed");
  return std::string(buf, ptr);
}

namespace {

double parse_double(std::string_view s, const std::string& where) {
  double v;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw format_error(where + ": bad number '" + std::string(s) + "'");
  return v;
}

uint64_t fnv1a(uint64_t h, const std::string& bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string checksum_hex(const std::string& a, const std::string& b) {
  uint64_t h = 0xcbf29ce484222325ULL;
  h = fnv1a(h, a);
  h = fnv1a(h, b);
  char buf[17];
  snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw io_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw io_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw io_error("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string serialize_instances(const HierarchicalGraph& hg) {
  std::ostringstream out;
  for (const GraphInstance& g : hg.instances) {
    out << g.id << ' ' << g.n() << ' ';
    if (g.label)
      out << *g.label;
    else
      out << '-';
    out << " e";
    for (int i = 0; i < g.n(); ++i)
      for (int j = i + 1; j < g.n(); ++j)
        if (g.adjacency(i, j) != 0.0) out << ' ' << i << '-' << j;
    out << " x";
    for (double v : g.features.data) out << ' ' << fmt_double(v);
    out << '\n';
  }
  return out.str();
}

std::string serialize_theta(const HierarchicalGraph& hg) {
  std::ostringstream out;
  for (int i = 0; i < hg.count(); ++i)
    for (int j = i + 1; j < hg.count(); ++j)
      if (hg.theta(i, j) != 0.0) out << i << ' ' << j << '\n';
  return out.str();
}

std::string read_file(const fs::path& path, const char* missing_what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error(std::string(missing_what) + ": " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void save_dataset(const HierarchicalGraph& hg, const fs::path& dir,
                  const json& extra_manifest) {
  fs::create_directories(dir);
  const std::string instances = serialize_instances(hg);
  const std::string theta = serialize_theta(hg);

  json manifest;
  if (extra_manifest.is_object()) manifest = extra_manifest;
  manifest["format_version"] = kDatasetFormatVersion;
  manifest["instance_count"] = hg.count();
  manifest["feature_width"] = hg.instances.empty() ? 0 : hg.instances.front().phi();
  manifest["class_count"] = hg.num_classes;
  manifest["labeled_ids"] = hg.labeled_ids;
  manifest["checksum"] = checksum_hex(instances, theta);

  write_atomic(dir / "instances.txt", instances);
  write_atomic(dir / "theta.txt", theta);
  write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");
}

LoadedDataset load_dataset(const fs::path& dir) {
  const fs::path manifest_path = dir / "manifest.json";
  if (!fs::exists(manifest_path))
    throw io_error("missing manifest: " + manifest_path.string());
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path, "missing manifest"));
  } catch (const json::exception& e) {
    throw format_error(manifest_path.string() + ": " + e.what());
  }

  const int version = manifest.value("format_version", -1);
  if (version != kDatasetFormatVersion)
    throw format_error(dir.string() + ": unsupported format version " +
                       std::to_string(version));

  const std::string instances = read_file(dir / "instances.txt", "missing file");
  const std::string theta = read_file(dir / "theta.txt", "missing file");
  const std::string expect = manifest.value("checksum", "");
  if (checksum_hex(instances, theta) != expect)
    throw format_error(dir.string() + ": checksum mismatch (corrupt or edited payload)");

  LoadedDataset out;
  out.manifest = manifest;
  HierarchicalGraph& hg = out.hg;
  hg.num_classes = manifest.value("class_count", 0);
  const int expected_count = manifest.value("instance_count", 0);
  const int phi = manifest.value("feature_width", 0);

  const fs::path ipath = dir / "instances.txt";
  std::istringstream in(instances);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = ipath.string() + ":" + std::to_string(line_no);
    std::istringstream ss(line);
    GraphInstance g;
    int n;
    std::string label_tok, tag;
    if (!(ss >> g.id >> n >> label_tok))
      throw format_error(where + ": truncated instance record");
    if (label_tok != "-") {
      int lbl;
      auto [p, ec] = std::from_chars(label_tok.data(), label_tok.data() + label_tok.size(), lbl);
      if (ec != std::errc() || p != label_tok.data() + label_tok.size())
        throw format_error(where + ": bad label '" + label_tok + "'");
      g.label = lbl;
    }
    if (!(ss >> tag) || tag != "e") throw format_error(where + ": expected edge section");
    g.adjacency = Matrix(n, n);
    std::string tok;
    while (ss >> tok && tok != "x") {
      const size_t dash = tok.find('-');
      if (dash == std::string::npos)
        throw format_error(where + ": bad edge '" + tok + "'");
      int a, b;
      auto [p1, e1] = std::from_chars(tok.data(), tok.data() + dash, a);
      auto [p2, e2] = std::from_chars(tok.data() + dash + 1, tok.data() + tok.size(), b);
      if (e1 != std::errc() || e2 != std::errc() || p1 != tok.data() + dash ||
          p2 != tok.data() + tok.size() || a < 0 || b < 0 || a >= n || b >= n)
        throw format_error(where + ": bad edge '" + tok + "'");
      g.adjacency(a, b) = 1.0;
      g.adjacency(b, a) = 1.0;
    }
    if (tok != "x") throw format_error(where + ": expected feature section");
    g.features = Matrix(n, phi);
    for (size_t k = 0; k < g.features.size(); ++k) {
      if (!(ss >> tok)) throw format_error(where + ": truncated feature list");
      g.features.data[k] = parse_double(tok, where);
    }
    if (ss >> tok) throw format_error(where + ": trailing tokens");
    hg.instances.push_back(std::move(g));
  }
  if (hg.count() != expected_count)
    throw format_error(dir.string() + ": manifest promises " +
                       std::to_string(expected_count) + " instances, file has " +
                       std::to_string(hg.count()));

  hg.theta = Matrix(std::max(1, hg.count()), std::max(1, hg.count()));
  const fs::path tpath = dir / "theta.txt";
  std::istringstream tin(theta);
  line_no = 0;
  while (std::getline(tin, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    int a, b;
    if (!(ss >> a >> b) || a < 0 || b < 0 || a >= hg.count() || b >= hg.count())
      throw format_error(tpath.string() + ":" + std::to_string(line_no) +
                         ": bad theta edge");
    hg.theta(a, b) = 1.0;
    hg.theta(b, a) = 1.0;
  }

  hg.labeled_ids = manifest.value("labeled_ids", std::vector<int>{});
  std::vector<char> labeled(hg.count(), 0);
  for (int id : hg.labeled_ids) {
    if (id < 0 || id >= hg.count())
      throw format_error(dir.string() + ": labeled id " + std::to_string(id) +
                         " out of range");
    labeled[id] = 1;
  }
  for (int i = 0; i < hg.count(); ++i)
    if (!labeled[i]) hg.unlabeled_ids.push_back(i);
  return out;
}

namespace {

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw format_error("missing file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<double> parse_csv_row(const std::string& line, const std::string& where) {
  std::vector<double> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const size_t b = cell.find_first_not_of(" \t\r");
    const size_t e = cell.find_last_not_of(" \t\r");
    if (b == std::string::npos) throw format_error(where + ": empty cell");
    out.push_back(parse_double(std::string_view(cell).substr(b, e - b + 1), where));
  }
  return out;
}

}  // namespace

std::vector<GraphInstance> load_tu_dataset(const fs::path& dir, const std::string& name) {
  const fs::path base = dir / name;
  auto file = [&](const char* suffix) { return fs::path(base.string() + suffix); };

  const std::vector<std::string> indicator = read_lines(file("_graph_indicator.txt"));
  const std::vector<std::string> graph_labels = read_lines(file("_graph_labels.txt"));
  const size_t total_nodes = indicator.size();
  const size_t num_graphs = graph_labels.size();
  if (total_nodes == 0 || num_graphs == 0)
    throw format_error(base.string() + ": empty indicator or label file");

  std::vector<int> node_graph(total_nodes);
  for (size_t i = 0; i < total_nodes; ++i) {
    std::istringstream ss(indicator[i]);
    int gid;
    if (!(ss >> gid) || gid < 1 || gid > static_cast<int>(num_graphs))
      throw format_error(file("_graph_indicator.txt").string() + ":" +
                         std::to_string(i + 1) + ": bad graph id");
    node_graph[i] = gid - 1;
  }

  std::vector<int> graph_size(num_graphs, 0);
  std::vector<int> node_local(total_nodes);
  for (size_t i = 0; i < total_nodes; ++i) node_local[i] = graph_size[node_graph[i]]++;

  // Graph labels remapped to 0-based by sorted unique value.
  std::vector<int> raw_labels(num_graphs);
  std::set<int> label_values;
  for (size_t i = 0; i < num_graphs; ++i) {
    std::istringstream ss(graph_labels[i]);
    if (!(ss >> raw_labels[i]))
      throw format_error(file("_graph_labels.txt").string() + ":" +
                         std::to_string(i + 1) + ": bad label");
    label_values.insert(raw_labels[i]);
  }
  std::map<int, int> label_map;
  for (int v : label_values) label_map.emplace(v, static_cast<int>(label_map.size()));

  // Node features: one-hot labels and/or raw attributes.
  const fs::path nl_path = file("_node_labels.txt");
  const fs::path na_path = file("_node_attributes.txt");
  const bool has_labels = fs::exists(nl_path);
  const bool has_attrs = fs::exists(na_path);
  if (!has_labels && !has_attrs)
    throw format_error(base.string() + ": need node labels or node attributes");

  std::vector<int> node_label;
  int label_width = 0;
  if (has_labels) {
    const std::vector<std::string> lines = read_lines(nl_path);
    if (lines.size() != total_nodes)
      throw format_error(nl_path.string() + ": " + std::to_string(lines.size()) +
                         " lines for " + std::to_string(total_nodes) + " nodes");
    std::set<int> values;
    node_label.resize(total_nodes);
    for (size_t i = 0; i < total_nodes; ++i) {
      std::istringstream ss(lines[i]);
      if (!(ss >> node_label[i]))
        throw format_error(nl_path.string() + ":" + std::to_string(i + 1) + ": bad label");
      values.insert(node_label[i]);
    }
    std::map<int, int> m;
    for (int v : values) m.emplace(v, static_cast<int>(m.size()));
    for (size_t i = 0; i < total_nodes; ++i) node_label[i] = m[node_label[i]];
    label_width = static_cast<int>(values.size());
  }

  std::vector<std::vector<double>> node_attrs;
  int attr_width = 0;
  if (has_attrs) {
    const std::vector<std::string> lines = read_lines(na_path);
    if (lines.size() != total_nodes)
      throw format_error(na_path.string() + ": " + std::to_string(lines.size()) +
                         " lines for " + std::to_string(total_nodes) + " nodes");
    node_attrs.resize(total_nodes);
    for (size_t i = 0; i < total_nodes; ++i) {
      node_attrs[i] = parse_csv_row(lines[i], na_path.string() + ":" + std::to_string(i + 1));
      if (i == 0)
        attr_width = static_cast<int>(node_attrs[i].size());
      else if (static_cast<int>(node_attrs[i].size()) != attr_width)
        throw format_error(na_path.string() + ":" + std::to_string(i + 1) +
                           ": ragged attribute row");
    }
  }

  std::vector<GraphInstance> graphs(num_graphs);
  for (size_t g = 0; g < num_graphs; ++g) {
    graphs[g].id = name + "/" + std::to_string(g);
    graphs[g].label = label_map.at(raw_labels[g]);
    graphs[g].adjacency = Matrix(graph_size[g], graph_size[g]);
    graphs[g].features = Matrix(graph_size[g], label_width + attr_width);
  }
  for (size_t i = 0; i < total_nodes; ++i) {
    GraphInstance& g = graphs[node_graph[i]];
    if (has_labels) g.features(node_local[i], node_label[i]) = 1.0;
    for (int a = 0; a < attr_width; ++a)
      g.features(node_local[i], label_width + a) = node_attrs[i][a];
  }

  // Edges: "i, j" with 1-based global ids; the reverse of every pair must be
  // present.
  const fs::path a_path = file("_A.txt");
  const std::vector<std::string> edge_lines = read_lines(a_path);
  std::set<std::pair<long, long>> directed;
  for (size_t k = 0; k < edge_lines.size(); ++k) {
    const std::string where = a_path.string() + ":" + std::to_string(k + 1);
    std::string cleaned = edge_lines[k];
    std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
    std::istringstream ss(cleaned);
    long a, b;
    if (!(ss >> a >> b)) throw format_error(where + ": expected an id pair");
    if (a < 1 || b < 1 || a > static_cast<long>(total_nodes) ||
        b > static_cast<long>(total_nodes))
      throw format_error(where + ": dangling node id");
    if (a == b) continue;
    if (node_graph[a - 1] != node_graph[b - 1])
      throw format_error(where + ": edge crosses graphs");
    directed.insert({a, b});
  }
  for (const auto& [a, b] : directed) {
    if (!directed.count({b, a}))
      throw format_error(a_path.string() + ": asymmetric edge list (" +
                         std::to_string(a) + "," + std::to_string(b) +
                         " has no reverse)");
    GraphInstance& g = graphs[node_graph[a - 1]];
    g.adjacency(node_local[a - 1], node_local[b - 1]) = 1.0;
  }
  return graphs;
}

void export_embeddings(const Matrix& embeddings, const Matrix& psi,
                       const std::vector<int>& truth, const std::vector<int>& predicted,
                       const fs::path& path) {
  if (static_cast<int>(truth.size()) != embeddings.rows ||
      static_cast<int>(predicted.size()) != embeddings.rows ||
      psi.rows != embeddings.rows)
    throw usage_error("export_embeddings: row count mismatch");
  std::ostringstream out;
  out << "id,true_class,pred_class";
  for (int j = 0; j < embeddings.cols; ++j) out << ",e" << j;
  out << '\n';
  for (int i = 0; i < embeddings.rows; ++i) {
    out << i << ',' << truth[i] << ',' << predicted[i];
    for (int j = 0; j < embeddings.cols; ++j) out << ',' << fmt_double(embeddings(i, j));
    out << '\n';
  }
  write_atomic(path, out.str());
}

void export_attention(const GraphInstance& g, const Matrix& attention,
                      const fs::path& path) {
  if (attention.cols != g.n())
    throw usage_error("export_attention: attention is " + attention.shape_str() +
                      " for an instance with " + std::to_string(g.n()) + " nodes");
  // Average across views, renormalized to sum 1.
  std::vector<double> avg(g.n(), 0.0);
  for (int r = 0; r < attention.rows; ++r)
    for (int j = 0; j < g.n(); ++j) avg[j] += attention(r, j);
  double sum = 0.0;
  for (double v : avg) sum += v;
  for (double& v : avg) v /= sum;

  std::ostringstream out;
  out << "node,weight,degree\n";
  for (int j = 0; j < g.n(); ++j) {
    int deg = 0;
    for (int i = 0; i < g.n(); ++i)
      if (g.adjacency(j, i) != 0.0) ++deg;
    out << j << ',' << fmt_double(avg[j]) << ',' << deg << '\n';
  }
  write_atomic(path, out.str());
}

void export_history(const std::vector<IterationRecord>& history, const fs::path& path) {
  std::ostringstream out;
  out << "round,committed,train_size,supervised_loss,disagreement_loss,total_loss,"
         "accuracy,macro_f1\n";
  for (const IterationRecord& r : history) {
    out << r.round << ',' << r.committed << ',' << r.train_size << ','
        << fmt_double(r.supervised) << ',' << fmt_double(r.disagreement) << ','
        << fmt_double(r.total) << ',';
    out << (std::isnan(r.eval_accuracy) ? std::string("-") : fmt_double(r.eval_accuracy));
    out << ',';
    out << (std::isnan(r.eval_macro_f1) ? std::string("-") : fmt_double(r.eval_macro_f1));
    out << '\n';
  }
  write_atomic(path, out.str());
}

namespace {

void write_matrix(std::ostringstream& out, const char* tag, const Matrix& m) {
  out << "matrix " << tag << ' ' << m.rows << ' ' << m.cols << '\n';
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      if (j) out << ' ';
      out << fmt_double(m(i, j));
    }
    out << '\n';
  }
}

Matrix read_matrix(std::istream& in, const std::string& tag, const std::string& where) {
  std::string kw, name;
  int rows, cols;
  if (!(in >> kw >> name >> rows >> cols) || kw != "matrix" || name != tag)
    throw format_error(where + ": expected matrix " + tag);
  Matrix m(rows, cols);
  for (size_t k = 0; k < m.size(); ++k) {
    std::string tok;
    if (!(in >> tok)) throw format_error(where + ": truncated matrix " + tag);
    m.data[k] = parse_double(tok, where);
  }
  return m;
}

}  // namespace

void save_params(const SageParams& sage, const HcParams& hc, const fs::path& path) {
  std::ostringstream out;
  out << "seal-params 1\n";
  const SageDims& d = sage.dims;
  out << "sage " << d.in_features << ' ' << d.gcn_hidden << ' ' << d.gcn_out << ' '
      << d.att_hidden << ' ' << d.att_views << ' ' << d.dense_units << ' ' << d.classes
      << ' ' << fmt_double(sage.dropout_rate) << ' ' << fmt_double(sage.penalty_coeff)
      << '\n';
  write_matrix(out, "w_gcn0", sage.w_gcn0);
  write_matrix(out, "w_gcn1", sage.w_gcn1);
  write_matrix(out, "w_att1", sage.w_att1);
  write_matrix(out, "w_att2", sage.w_att2);
  write_matrix(out, "w_dense", sage.w_dense);
  write_matrix(out, "w_out", sage.w_out);
  out << "hc " << hc.in_dim << ' ' << hc.hidden << ' ' << hc.classes << '\n';
  write_matrix(out, "w0", hc.w0);
  write_matrix(out, "w1", hc.w1);
  write_atomic(path, out.str());
}

LoadedParams load_params(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path.string());
  const std::string where = path.string();
  std::string magic;
  int version;
  if (!(in >> magic >> version) || magic != "seal-params")
    throw format_error(where + ": not a parameter file");
  if (version != 1)
    throw format_error(where + ": unsupported version " + std::to_string(version));

  LoadedParams out;
  std::string kw;
  if (!(in >> kw) || kw != "sage") throw format_error(where + ": expected sage block");
  SageDims d;
  std::string drop_tok, pen_tok;
  if (!(in >> d.in_features >> d.gcn_hidden >> d.gcn_out >> d.att_hidden >>
        d.att_views >> d.dense_units >> d.classes >> drop_tok >> pen_tok))
    throw format_error(where + ": truncated sage block");
  out.sage.dims = d;
  out.sage.dropout_rate = parse_double(drop_tok, where);
  out.sage.penalty_coeff = parse_double(pen_tok, where);
  out.sage.w_gcn0 = read_matrix(in, "w_gcn0", where);
  out.sage.w_gcn1 = read_matrix(in, "w_gcn1", where);
  out.sage.w_att1 = read_matrix(in, "w_att1", where);
  out.sage.w_att2 = read_matrix(in, "w_att2", where);
  out.sage.w_dense = read_matrix(in, "w_dense", where);
  out.sage.w_out = read_matrix(in, "w_out", where);
  if (!(in >> kw) || kw != "hc") throw format_error(where + ": expected hc block");
  if (!(in >> out.hc.in_dim >> out.hc.hidden >> out.hc.classes))
    throw format_error(where + ": truncated hc block");
  out.hc.w0 = read_matrix(in, "w0", where);
  out.hc.w1 = read_matrix(in, "w1", where);
  return out;
}

}  // namespace seal::io

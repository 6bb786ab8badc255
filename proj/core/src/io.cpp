#include "gcrfbc/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include <nlohmann/json.hpp>

namespace gcrfbc {

namespace {

using nlohmann::json;

json require_field(const json& doc, const std::string& field, const std::string& context) {
  const auto it = doc.find(field);
  if (it == doc.end()) {
    throw DataError(context + ": missing field '" + field + "'");
  }
  return *it;
}

VectorXd parse_vector(const json& arr, const std::string& context) {
  if (!arr.is_array()) throw DataError(context + " must be an array of numbers");
  VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw DataError(context + " must contain only numbers");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  return v;
}

json vector_to_json(const VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DataError("parse error in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_dataset(const std::string& path, const Dataset& dataset) {
  dataset.validate();
  json doc;
  doc["version"] = 1;
  doc["n_nodes"] = dataset.n_nodes();
  doc["K"] = dataset.n_predictors();
  doc["L"] = dataset.n_graphs();
  json instances = json::array();
  for (const StructuredInstance& inst : dataset.instances) {
    json rec;
    json predictors = json::array();
    for (int i = 0; i < inst.n_nodes; ++i) {
      predictors.push_back(vector_to_json(inst.predictors.row(i)));
    }
    rec["predictors"] = predictors;
    json graphs = json::array();
    for (const MatrixXd& s : inst.similarities) {
      json triples = json::array();
      for (int i = 0; i < inst.n_nodes; ++i) {
        for (int j = i + 1; j < inst.n_nodes; ++j) {
          if (s(i, j) != 0.0) triples.push_back(json::array({i, j, s(i, j)}));
        }
      }
      graphs.push_back(triples);
    }
    rec["similarities"] = graphs;
    if (inst.labels) {
      json labels = json::array();
      for (int i = 0; i < inst.n_nodes; ++i) labels.push_back((*inst.labels)[i]);
      rec["labels"] = labels;
    }
    instances.push_back(rec);
  }
  doc["instances"] = instances;
  write_json_file(path, doc);
}

Dataset load_dataset(const std::string& path) {
  const json doc = load_json_file(path);
  const std::string ctx = "dataset '" + path + "'";

  const int version = require_field(doc, "version", ctx).get<int>();
  if (version != 1) throw DataError(ctx + ": unsupported version " + std::to_string(version));
  const int n = require_field(doc, "n_nodes", ctx).get<int>();
  const int k = require_field(doc, "K", ctx).get<int>();
  const int l = require_field(doc, "L", ctx).get<int>();
  const json instances = require_field(doc, "instances", ctx);
  if (!instances.is_array() || instances.empty()) {
    throw DataError(ctx + ": 'instances' must be a nonempty array");
  }

  Dataset ds;
  ds.instances.reserve(instances.size());
  for (std::size_t jdx = 0; jdx < instances.size(); ++jdx) {
    const json& rec = instances[jdx];
    const std::string ictx = ctx + ", instance " + std::to_string(jdx);
    StructuredInstance inst;
    inst.n_nodes = n;

    const json predictors = require_field(rec, "predictors", ictx);
    if (!predictors.is_array() || static_cast<int>(predictors.size()) != n) {
      throw DataError(ictx + ": 'predictors' must have one row per node");
    }
    inst.predictors.resize(n, k);
    for (int i = 0; i < n; ++i) {
      const VectorXd row = parse_vector(predictors[static_cast<std::size_t>(i)],
                                        ictx + " predictors row " + std::to_string(i));
      if (row.size() != k) throw DataError(ictx + ": predictor row has wrong length");
      inst.predictors.row(i) = row;
    }

    const json graphs = require_field(rec, "similarities", ictx);
    if (!graphs.is_array() || static_cast<int>(graphs.size()) != l) {
      throw DataError(ictx + ": 'similarities' must hold L edge lists");
    }
    inst.similarities.assign(static_cast<std::size_t>(l), MatrixXd::Zero(n, n));
    for (int ll = 0; ll < l; ++ll) {
      const json& triples = graphs[static_cast<std::size_t>(ll)];
      if (!triples.is_array()) throw DataError(ictx + ": edge list must be an array");
      MatrixXd& s = inst.similarities[static_cast<std::size_t>(ll)];
      for (const json& t : triples) {
        if (!t.is_array() || t.size() != 3) {
          throw DataError(ictx + ": edges must be (i, j, weight) triples");
        }
        const int i = t[0].get<int>();
        const int j = t[1].get<int>();
        const double w = t[2].get<double>();
        if (i < 0 || j < 0 || i >= n || j >= n || i >= j) {
          throw DataError(ictx + ": edge (" + std::to_string(i) + ", " + std::to_string(j) +
                          ") is not strictly upper-triangular");
        }
        if (s(i, j) != 0.0) throw DataError(ictx + ": duplicate edge");
        s(i, j) = w;
        s(j, i) = w;
      }
    }

    if (rec.contains("labels")) {
      const json& labels = rec["labels"];
      if (!labels.is_array() || static_cast<int>(labels.size()) != n) {
        throw DataError(ictx + ": 'labels' must have one entry per node");
      }
      VectorXi y(n);
      for (int i = 0; i < n; ++i) y[i] = labels[static_cast<std::size_t>(i)].get<int>();
      inst.labels = y;
    }
    ds.instances.push_back(std::move(inst));
  }

  ds.validate();
  return ds;
}

void save_model(const std::string& path, const ModelParams& params,
                const std::optional<VariationalState>& xi, const std::string& variant) {
  params.validate();
  json doc;
  doc["version"] = 1;
  doc["alpha"] = vector_to_json(params.alpha);
  doc["beta"] = vector_to_json(params.beta);
  if (!variant.empty()) doc["variant"] = variant;
  if (xi) {
    json rows = json::array();
    for (Eigen::Index j = 0; j < xi->xi.rows(); ++j) {
      rows.push_back(vector_to_json(xi->xi.row(j)));
    }
    doc["xi"] = rows;
  }
  write_json_file(path, doc);
}

ModelFile load_model(const std::string& path) {
  const json doc = load_json_file(path);
  const std::string ctx = "model '" + path + "'";

  ModelFile mf;
  mf.params.alpha = parse_vector(require_field(doc, "alpha", ctx), ctx + ": alpha");
  mf.params.beta = parse_vector(require_field(doc, "beta", ctx), ctx + ": beta");
  mf.params.validate();
  if (doc.contains("variant")) mf.variant = doc["variant"].get<std::string>();
  if (doc.contains("xi")) {
    const json& rows = doc["xi"];
    if (!rows.is_array() || rows.empty()) throw DataError(ctx + ": 'xi' must be a nonempty array");
    const std::size_t cols = rows[0].size();
    MatrixXd xi(rows.size(), cols);
    for (std::size_t j = 0; j < rows.size(); ++j) {
      const VectorXd row = parse_vector(rows[j], ctx + ": xi row " + std::to_string(j));
      if (static_cast<std::size_t>(row.size()) != cols) {
        throw DataError(ctx + ": xi rows have inconsistent lengths");
      }
      xi.row(static_cast<Eigen::Index>(j)) = row;
    }
    mf.xi = VariationalState{std::move(xi)};
  }
  return mf;
}

void write_eval_csv(std::ostream& os, const EvalReport& report) {
  os << "auc,log_likelihood,likelihood_semantics,variance_norm\n";
  os << fmt_double(report.auc) << ',' << fmt_double(report.log_likelihood) << ','
     << report.likelihood_semantics << ',' << fmt_double(report.variance_norm) << '\n';
}

void write_probs_csv(std::ostream& os, const Dataset& dataset, const MatrixXd& per_node_probs) {
  os << "instance,node,prob,label\n";
  for (int j = 0; j < dataset.size(); ++j) {
    const StructuredInstance& inst = dataset.instances[static_cast<std::size_t>(j)];
    for (int i = 0; i < inst.n_nodes; ++i) {
      os << j << ',' << i << ',' << fmt_double(per_node_probs(j, i)) << ',';
      if (inst.labels) {
        os << (*inst.labels)[i];
      }
      os << '\n';
    }
  }
}

}  // namespace gcrfbc

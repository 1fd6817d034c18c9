#include "hawkes/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "hawkes/errors.hpp"
#include "hawkes/version.hpp"
#include "json.hpp"

namespace hawkes {

using nlohmann::json;

std::string fmt_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string meta_path_for(const std::string& csv_path) {
  const std::string suffix = ".csv";
  if (csv_path.size() > suffix.size() &&
      csv_path.compare(csv_path.size() - suffix.size(), suffix.size(),
                       suffix) == 0) {
    return csv_path.substr(0, csv_path.size() - suffix.size()) + ".meta.json";
  }
  return csv_path + ".meta.json";
}

namespace {

std::string trimmed(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = s.find(sep, start);
    if (at == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, at - start));
    start = at + 1;
  }
}

double parse_double(const std::string& s, long line) {
  const std::string t = trimmed(s);
  double value = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError("bad number '" + t + "'", line);
  return value;
}

int parse_int(const std::string& s, long line) {
  const std::string t = trimmed(s);
  int value = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size())
    throw ParseError("bad integer '" + t + "'", line);
  return value;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << j.dump(2) << '\n';
}

json kernel_to_json(const KernelSpec& kernel) {
  json j;
  if (kernel.kind == KernelKind::exponential) {
    j["type"] = "exponential";
    j["zeta"] = kernel.zeta;
  } else {
    j["type"] = "gaussian_basis";
    j["centers"] = kernel.centers;
    j["scale"] = kernel.scale;
  }
  return j;
}

KernelSpec kernel_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "exponential")
    return KernelSpec::make_exponential(j.at("zeta").get<double>());
  if (type == "gaussian_basis")
    return KernelSpec::make_gaussian(
        j.at("centers").get<std::vector<double>>(),
        j.at("scale").get<double>());
  throw ParseError("unknown kernel type '" + type + "'", 0);
}

json w_to_json(const std::vector<double>& w, int dims, int basis) {
  json rows = json::array();
  for (int i = 0; i < dims; ++i) {
    json row = json::array();
    for (int j = 0; j < dims; ++j) {
      json cell = json::array();
      for (int m = 0; m < basis; ++m) {
        cell.push_back(w[(static_cast<std::size_t>(i) * dims + j) * basis + m]);
      }
      row.push_back(std::move(cell));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> w_from_json(const json& j, int dims, int basis) {
  std::vector<double> w(static_cast<std::size_t>(dims) * dims * basis, 0.0);
  if (static_cast<int>(j.size()) != dims)
    throw ParseError("weight matrix row count mismatch", 0);
  for (int i = 0; i < dims; ++i) {
    const json& row = j.at(i);
    if (static_cast<int>(row.size()) != dims)
      throw ParseError("weight matrix column count mismatch", 0);
    for (int jj = 0; jj < dims; ++jj) {
      const json& cell = row.at(jj);
      if (static_cast<int>(cell.size()) != basis)
        throw ParseError("weight matrix basis count mismatch", 0);
      for (int m = 0; m < basis; ++m) {
        w[(static_cast<std::size_t>(i) * dims + jj) * basis + m] =
            cell.at(m).get<double>();
      }
    }
  }
  return w;
}

ParamVec paramvec_from_json(const json& j, int dims, int basis) {
  ParamVec v;
  v.mu = j.at("mu").get<std::vector<double>>();
  if (static_cast<int>(v.mu.size()) != dims)
    throw ParseError("baseline count mismatch", 0);
  v.w = w_from_json(j.at("w"), dims, basis);
  return v;
}

json paramvec_to_json(const ParamVec& v, int dims, int basis) {
  json j;
  j["mu"] = v.mu;
  j["w"] = w_to_json(v.w, dims, basis);
  return j;
}

}  // namespace

void save_events(const EventSequence& seq, const std::string& path) {
  seq.validate();
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path, 0);
  out << "time,dim\n";
  for (const Event& e : seq.events) {
    out << fmt_double(e.time) << ',' << e.dim << '\n';
  }
  json meta;
  meta["T"] = seq.horizon;
  meta["D"] = seq.dims;
  write_json_file(meta, meta_path_for(path));
}

EventSequence load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0);

  std::vector<Event> events;
  std::vector<long> event_lines;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    if (line_no == 1 && t.rfind("time", 0) == 0) continue;
    const std::vector<std::string> fields = split(t, ',');
    if (fields.size() != 2)
      throw ParseError("expected 'time,dim'", line_no);
    Event e;
    e.time = parse_double(fields[0], line_no);
    e.dim = parse_int(fields[1], line_no);
    events.push_back(e);
    event_lines.push_back(line_no);
  }

  for (std::size_t k = 1; k < events.size(); ++k) {
    if (events[k].time < events[k - 1].time)
      throw ValidationError("event times out of order at line " +
                            std::to_string(event_lines[k]));
  }

  double horizon = 0.0;
  int dims = 0;
  std::ifstream meta_in(meta_path_for(path));
  if (meta_in.good()) {
    meta_in.close();
    const json meta = read_json_file(meta_path_for(path));
    horizon = meta.at("T").get<double>();
    dims = meta.at("D").get<int>();
  } else {
    if (events.empty())
      throw ValidationError("no events and no sidecar to infer shape from");
    for (const Event& e : events) dims = std::max(dims, e.dim + 1);
    // Ties must spread before the horizon is pinned just above the final
    // time, or a trailing tie group would have no room below it.
    perturb_ties(events, std::numeric_limits<double>::infinity());
    horizon = std::nextafter(events.back().time,
                             std::numeric_limits<double>::infinity());
    return EventSequence::checked(std::move(events), horizon, dims);
  }

  perturb_ties(events, horizon);
  return EventSequence::checked(std::move(events), horizon, dims);
}

void save_model(const ModelParams& params, const KernelSpec& kernel,
                const std::string& path) {
  params.validate();
  json j;
  j["version"] = kVersion;
  j["kernel"] = kernel_to_json(kernel);
  j["mu"] = params.mu;
  j["W"] = w_to_json(params.w, params.dims, params.basis);
  write_json_file(j, path);
}

LoadedModel load_model(const std::string& path) {
  const json j = read_json_file(path);
  LoadedModel out;
  try {
    out.kernel = kernel_from_json(j.at("kernel"));
    out.params.mu = j.at("mu").get<std::vector<double>>();
    out.params.dims = static_cast<int>(out.params.mu.size());
    out.params.basis = out.kernel.basis_count();
    out.params.w = w_from_json(j.at("W"), out.params.dims, out.params.basis);
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  out.params.validate();
  return out;
}

void save_truth(const GroundTruth& truth, const KernelSpec& kernel,
                const std::string& path) {
  json j;
  j["version"] = kVersion;
  j["kernel"] = kernel_to_json(kernel);
  json adj = json::array();
  for (int i = 0; i < truth.dims; ++i) {
    json row = json::array();
    for (int jj = 0; jj < truth.dims; ++jj) {
      row.push_back(truth.edge(i, jj) ? 1 : 0);
    }
    adj.push_back(std::move(row));
  }
  j["adjacency"] = std::move(adj);
  j["mu"] = truth.params.mu;
  j["W"] = w_to_json(truth.params.w, truth.dims, truth.params.basis);
  write_json_file(j, path);
}

LoadedTruth load_truth(const std::string& path) {
  const json j = read_json_file(path);
  LoadedTruth out;
  try {
    out.kernel = kernel_from_json(j.at("kernel"));
    out.truth.params.mu = j.at("mu").get<std::vector<double>>();
    const int D = static_cast<int>(out.truth.params.mu.size());
    out.truth.dims = D;
    out.truth.params.dims = D;
    out.truth.params.basis = out.kernel.basis_count();
    out.truth.params.w =
        w_from_json(j.at("W"), D, out.truth.params.basis);
    out.truth.adjacency.assign(static_cast<std::size_t>(D) * D, 0);
    const json& adj = j.at("adjacency");
    for (int i = 0; i < D; ++i) {
      for (int jj = 0; jj < D; ++jj) {
        out.truth.adjacency[static_cast<std::size_t>(i) * D + jj] =
            adj.at(i).at(jj).get<int>() != 0 ? 1 : 0;
      }
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  return out;
}

void save_posterior(const VIReport& report, const KernelSpec& kernel,
                    const EmConfig& cfg, const std::string& path) {
  const int D = report.state.dims;
  const int M = report.state.basis;
  json j;
  j["version"] = kVersion;
  j["kernel"] = kernel_to_json(kernel);
  j["dims"] = D;
  j["basis"] = M;
  j["w_prior"] = prior_name(report.prior.w_kind);
  j["gamma_mu"] = paramvec_to_json(report.state.gamma_mu, D, M);
  j["gamma_sigma"] = paramvec_to_json(report.state.gamma_sigma, D, M);
  j["alpha_mu"] = report.prior.alpha_mu;
  j["alpha_w"] = report.prior.alpha_w;
  json cfg_j;
  cfg_j["L"] = cfg.L;
  cfg_j["beta"] = cfg.beta;
  cfg_j["t_e"] = cfg.t_e;
  cfg_j["t_em"] = cfg.t_em;
  cfg_j["eta"] = cfg.eta;
  cfg_j["lr_decay"] = cfg.lr_decay;
  cfg_j["seed"] = cfg.seed;
  cfg_j["init_alpha"] = cfg.init_alpha;
  j["config"] = std::move(cfg_j);
  j["elbo_rounds"] = report.elbo_rounds;
  write_json_file(j, path);
}

LoadedPosterior load_posterior(const std::string& path) {
  const json j = read_json_file(path);
  LoadedPosterior out;
  try {
    out.kernel = kernel_from_json(j.at("kernel"));
    const int D = j.at("dims").get<int>();
    const int M = j.at("basis").get<int>();
    out.state.dims = D;
    out.state.basis = M;
    out.state.gamma_mu = paramvec_from_json(j.at("gamma_mu"), D, M);
    out.state.gamma_sigma = paramvec_from_json(j.at("gamma_sigma"), D, M);
    out.prior.dims = D;
    out.prior.basis = M;
    out.prior.w_kind = parse_prior_spec("w=" + j.at("w_prior").get<std::string>());
    out.prior.alpha_mu = j.at("alpha_mu").get<std::vector<double>>();
    out.prior.alpha_w = j.at("alpha_w").get<std::vector<double>>();
    out.elbo_rounds = j.at("elbo_rounds").get<std::vector<double>>();
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what(), 0);
  }
  out.prior.validate();
  return out;
}

KernelSpec parse_kernel_spec(const std::string& text) {
  const std::string t = trimmed(text);
  const std::size_t colon = t.find(':');
  const std::string head = t.substr(0, colon);
  const std::string rest =
      colon == std::string::npos ? std::string() : t.substr(colon + 1);

  if (head == "exp") {
    double zeta = 1.0;
    if (!rest.empty()) {
      for (const std::string& part : split(rest, ',')) {
        const std::vector<std::string> kv = split(part, '=');
        if (kv.size() != 2) throw ParseError("expected key=value in '" + part + "'", 0);
        const std::string key = trimmed(kv[0]);
        if (key == "zeta")
          zeta = parse_double(kv[1], 0);
        else
          throw ParseError("unknown exponential kernel key '" + key + "'", 0);
      }
    }
    return KernelSpec::make_exponential(zeta);
  }
  if (head == "sg") {
    int basis = 10;
    double cutoff = 5.0;
    if (!rest.empty()) {
      for (const std::string& part : split(rest, ',')) {
        const std::vector<std::string> kv = split(part, '=');
        if (kv.size() != 2) throw ParseError("expected key=value in '" + part + "'", 0);
        const std::string key = trimmed(kv[0]);
        if (key == "M")
          basis = parse_int(kv[1], 0);
        else if (key == "Tc")
          cutoff = parse_double(kv[1], 0);
        else
          throw ParseError("unknown gaussian kernel key '" + key + "'", 0);
      }
    }
    return KernelSpec::make_gaussian_cutoff(basis, cutoff);
  }
  throw ParseError("unknown kernel '" + head + "' (use exp:... or sg:...)", 0);
}

PenaltySpec parse_penalty_spec(const std::string& text) {
  const std::string t = trimmed(text);
  PenaltySpec spec;
  if (t.empty() || t == "none") return spec;
  for (const std::string& raw : split(t, '+')) {
    const std::string term = trimmed(raw);
    const std::size_t colon = term.find(':');
    const std::string head = term.substr(0, colon);
    PenaltyKind kind;
    if (head == "l1")
      kind = PenaltyKind::l1;
    else if (head == "l2")
      kind = PenaltyKind::l2;
    else if (head == "gl")
      kind = PenaltyKind::group_lasso;
    else
      throw ParseError("unknown penalty '" + head + "'", 0);
    if (colon == std::string::npos)
      throw ParseError("penalty '" + head + "' needs c=<strength>", 0);
    double strength = -1.0;
    for (const std::string& part : split(term.substr(colon + 1), ',')) {
      const std::vector<std::string> kv = split(part, '=');
      if (kv.size() != 2 || trimmed(kv[0]) != "c")
        throw ParseError("expected c=<strength> in '" + part + "'", 0);
      strength = parse_double(kv[1], 0);
    }
    if (strength < 0.0)
      throw ParseError("penalty strength must be nonnegative", 0);
    spec.add(kind, strength);
  }
  return spec;
}

WPrior parse_prior_spec(const std::string& text) {
  WPrior w_kind = WPrior::laplace;
  for (const std::string& raw : split(trimmed(text), ',')) {
    const std::string part = trimmed(raw);
    if (part.empty()) continue;
    const std::vector<std::string> kv = split(part, '=');
    std::string key = "w", value;
    if (kv.size() == 2) {
      key = trimmed(kv[0]);
      value = trimmed(kv[1]);
    } else if (kv.size() == 1) {
      value = trimmed(kv[0]);
    } else {
      throw ParseError("bad prior term '" + part + "'", 0);
    }
    if (key == "mu") {
      if (value != "gaussian")
        throw ParseError("baseline prior must be gaussian", 0);
      continue;
    }
    if (key != "w") throw ParseError("unknown prior key '" + key + "'", 0);
    if (value == "laplace")
      w_kind = WPrior::laplace;
    else if (value == "gaussian")
      w_kind = WPrior::gaussian;
    else if (value == "group-laplace" || value == "group_laplace")
      w_kind = WPrior::group_laplace;
    else if (value == "column-group" || value == "column_group")
      w_kind = WPrior::column_group;
    else
      throw ParseError("unknown weight prior '" + value + "'", 0);
  }
  return w_kind;
}

std::string prior_name(WPrior kind) {
  switch (kind) {
    case WPrior::gaussian:
      return "gaussian";
    case WPrior::laplace:
      return "laplace";
    case WPrior::group_laplace:
      return "group-laplace";
    case WPrior::column_group:
      return "column-group";
  }
  return "unknown";
}

}  // namespace hawkes

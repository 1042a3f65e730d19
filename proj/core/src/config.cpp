#include "ratesim/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ratesim {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing required field");
  return *it;
}

double num(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<long>();
}

double opt_num(const json& j, const std::string& path, const std::string& key, double dflt) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  return num(j.at(key), path + "." + key);
}

long opt_int(const json& j, const std::string& path, const std::string& key, long dflt) {
  if (!j.is_object() || !j.contains(key)) return dflt;
  return integer(j.at(key), path + "." + key);
}

std::vector<int> int_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(static_cast<int>(integer(j[i], path + "[" + std::to_string(i) + "]")));
  }
  return out;
}

std::vector<double> num_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(num(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

JointPmf pmf(const json& j, const std::string& path) {
  auto dims = int_array(member(j, path, "dims"), path + ".dims");
  auto probs = num_array(member(j, path, "probs"), path + ".probs");
  try {
    return JointPmf(std::move(dims), std::move(probs));
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
}

CondPmf cond_pmf(const json& j, const std::string& path) {
  auto in = int_array(member(j, path, "in_dims"), path + ".in_dims");
  auto out = int_array(member(j, path, "out_dims"), path + ".out_dims");
  auto rows = num_array(member(j, path, "rows"), path + ".rows");
  try {
    return make_cond_pmf(std::move(in), std::move(out), std::move(rows));
  } catch (const std::invalid_argument& e) {
    bad(path, e.what());
  }
}

Caps caps_of(const json& j, const std::string& path) {
  Caps caps;
  if (j.is_object() && j.contains("caps")) {
    const json& c = j.at("caps");
    long mc = opt_int(c, path + ".caps", "max_codebook", static_cast<long>(caps.max_codebook));
    long ms = opt_int(c, path + ".caps", "max_search", static_cast<long>(caps.max_search));
    if (mc < 1) bad(path + ".caps.max_codebook", "must be positive");
    if (ms < 1) bad(path + ".caps.max_search", "must be positive");
    caps.max_codebook = static_cast<std::size_t>(mc);
    caps.max_search = static_cast<std::size_t>(ms);
  }
  return caps;
}

std::vector<int> n_list_of(const json& j) {
  const json& n = member(j, "$", "n");
  std::vector<int> out;
  if (n.is_array()) {
    out = int_array(n, "$.n");
  } else {
    out.push_back(static_cast<int>(integer(n, "$.n")));
  }
  if (out.empty()) bad("$.n", "needs at least one blocklength");
  for (int v : out) {
    if (v < 1) bad("$.n", "blocklengths must be >= 1");
  }
  return out;
}

void parse_neg(const json& j, ScenarioConfig& sc) {
  NegSchemeConfig& c = sc.neg;
  c.n = sc.n_list.front();
  c.eps = opt_num(j, "$", "eps", 0.12);
  if (c.eps <= 0) bad("$.eps", "must be positive");
  c.seed = static_cast<std::uint64_t>(opt_int(j, "$", "seed", 0));
  c.caps = caps_of(j, "$");

  const json& r = member(j, "$", "rates");
  c.rates.r0 = opt_num(r, "$.rates", "r0", 0);
  c.rates.s0 = opt_num(r, "$.rates", "s0", 0);
  c.rates.s1 = opt_num(r, "$.rates", "s1", 0);
  c.rates.s2 = opt_num(r, "$.rates", "s2", 0);
  c.rates.s3 = opt_num(r, "$.rates", "s3", 0);
  c.rates.t2 = opt_num(r, "$.rates", "t2", 0);
  c.rates.t3 = opt_num(r, "$.rates", "t3", 0);
  for (int v = 0; v < kNumRateVars; ++v) {
    if (c.rates.get(v) < 0) bad(std::string("$.rates.") + kRateVarNames[v], "must be nonnegative");
  }
  if (c.rates.t2 < c.rates.s2) bad("$.rates.t2", "must be >= s2");
  if (c.rates.t3 < c.rates.s3) bad("$.rates.t3", "must be >= s3");

  c.source = pmf(member(j, "$", "source"), "$.source");
  if (c.source.rank() != 4) bad("$.source.dims", "source must have 4 dimensions (U,V2,V3,X)");
  c.channel = cond_pmf(member(j, "$", "channel"), "$.channel");
  if (c.channel.in_dims != std::vector<int>{c.source.dims()[3]}) {
    bad("$.channel.in_dims", "must equal the source X dimension");
  }
  if (c.channel.out_dims.size() != 3) {
    bad("$.channel.out_dims", "channel must have 3 output dimensions (Y1,Y2,Y3)");
  }
}

std::array<std::vector<int>, 3> triple_table(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) bad(path, "expected an array of 3 tables");
  std::array<std::vector<int>, 3> out;
  for (int k = 0; k < 3; ++k) out[k] = int_array(j[k], path + "[" + std::to_string(k) + "]");
  return out;
}

void parse_ic(const json& j, ScenarioConfig& sc) {
  ICConfig& c = sc.ic;
  c.n = sc.n_list.front();
  c.eps = opt_num(j, "$", "eps", 0.12);
  if (c.eps <= 0) bad("$.eps", "must be positive");
  c.seed = static_cast<std::uint64_t>(opt_int(j, "$", "seed", 0));
  c.caps = caps_of(j, "$");

  auto rates = num_array(member(j, "$", "rates"), "$.rates");
  if (rates.size() != 3) bad("$.rates", "expected 3 rates [r1, r2, r3]");
  for (std::size_t i = 0; i < 3; ++i) {
    if (rates[i] < 0) bad("$.rates[" + std::to_string(i) + "]", "must be nonnegative");
    c.rates[i] = rates[i];
  }

  const json& s = member(j, "$", "spec");
  DetICSpec& spec = c.spec;
  spec.q_dim = static_cast<int>(integer(member(s, "$.spec", "q_dim"), "$.spec.q_dim"));
  auto xd = int_array(member(s, "$.spec", "x_dim"), "$.spec.x_dim");
  auto sd = int_array(member(s, "$.spec", "s_dim"), "$.spec.s_dim");
  auto yd = int_array(member(s, "$.spec", "y_dim"), "$.spec.y_dim");
  if (xd.size() != 3) bad("$.spec.x_dim", "expected 3 entries");
  if (sd.size() != 3) bad("$.spec.s_dim", "expected 3 entries");
  if (yd.size() != 3) bad("$.spec.y_dim", "expected 3 entries");
  std::copy(xd.begin(), xd.end(), spec.x_dim.begin());
  std::copy(sd.begin(), sd.end(), spec.s_dim.begin());
  std::copy(yd.begin(), yd.end(), spec.y_dim.begin());

  const json& cd = member(s, "$.spec", "comp_dim");
  if (!cd.is_array() || cd.size() != 3) bad("$.spec.comp_dim", "expected a 3x3 array");
  for (int l = 0; l < 3; ++l) {
    auto row = int_array(cd[l], "$.spec.comp_dim[" + std::to_string(l) + "]");
    if (row.size() != 3) bad("$.spec.comp_dim[" + std::to_string(l) + "]", "expected 3 entries");
    std::copy(row.begin(), row.end(), spec.comp_dim[l].begin());
  }

  const json& g = member(s, "$.spec", "g");
  if (!g.is_array() || g.size() != 3) bad("$.spec.g", "expected 3 sender entries");
  for (int l = 0; l < 3; ++l) {
    spec.g[l] = triple_table(g[l], "$.spec.g[" + std::to_string(l) + "]");
  }
  spec.h = triple_table(member(s, "$.spec", "h"), "$.spec.h");
  spec.f = triple_table(member(s, "$.spec", "f"), "$.spec.f");

  if (auto v = validate_spec(spec); !v.ok) bad("$.spec", v.message);

  c.q = pmf(member(j, "$", "q"), "$.q");
  if (c.q.rank() != 1 || c.q.dims()[0] != spec.q_dim) bad("$.q.dims", "must be [q_dim]");
  const json& xq = member(j, "$", "x_given_q");
  if (!xq.is_array() || xq.size() != 3) bad("$.x_given_q", "expected 3 conditional pmfs");
  for (int l = 0; l < 3; ++l) {
    std::string path = "$.x_given_q[" + std::to_string(l) + "]";
    c.x_given_q[l] = cond_pmf(xq[l], path);
    if (c.x_given_q[l].in_dims != std::vector<int>{spec.q_dim}) bad(path + ".in_dims", "must be [q_dim]");
    if (c.x_given_q[l].out_dims != std::vector<int>{spec.x_dim[l]}) {
      bad(path + ".out_dims", "must be [x_dim[l]]");
    }
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("JSON parse error: ") + e.what());
  }
  ScenarioConfig sc;
  const json& kind = member(j, "$", "kind");
  if (!kind.is_string()) bad("$.kind", "expected a string");
  sc.kind = kind.get<std::string>();
  if (sc.kind != "neg-bc" && sc.kind != "det-ic") {
    bad("$.kind", "must be \"neg-bc\" or \"det-ic\"");
  }
  sc.n_list = n_list_of(j);
  sc.trials = opt_int(j, "$", "trials", 1000);
  if (sc.trials < 1) bad("$.trials", "must be >= 1");
  sc.fresh_codebook_every = opt_int(j, "$", "fresh_codebook_every", 0);
  sc.draws = opt_int(j, "$", "draws", 500);
  if (sc.draws < 1) bad("$.draws", "must be >= 1");
  sc.delta = opt_num(j, "$", "delta", 0.05);
  if (sc.delta <= 0) bad("$.delta", "must be positive");

  if (sc.kind == "neg-bc") {
    parse_neg(j, sc);
  } else {
    parse_ic(j, sc);
  }
  return sc;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace ratesim

#include "lgp_runner/config.hpp"

#include <openssl/evp.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace lgp::runner {

namespace pt = boost::property_tree;

namespace {

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* b = v.data();
  const auto* e = v.data() + v.size();
  const auto res = std::from_chars(b, e, out);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(out))
    throw UsageError(key + ": expected a number, got \"" + v + "\"");
  return out;
}

std::uint64_t to_count(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw UsageError(key + ": expected a non-negative integer, got \"" + v + "\"");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw UsageError(key + ": expected a boolean, got \"" + v + "\"");
}

std::string one_of(const std::string& key, const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (v == a) return v;
  std::string list;
  for (const char* a : allowed) list += std::string(list.empty() ? "" : "|") + a;
  throw UsageError(key + ": expected " + list + ", got \"" + v + "\"");
}

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"group", {"id"}},
      {"domain", {"shape", "lower", "upper", "center", "radius", "halo_width"}},
      {"datum", {"psi", "reference"}},
      {"sweep", {"eps", "rho", "region", "artifacts"}},
      {"solver", {"max_iter", "tol", "step_rule", "check_every", "power_iterations", "warm_start", "certificate_tol"}},
      {"oracle", {"mincut", "mincut_tol", "p_list", "p_tol", "p_max_iter"}},
      {"run", {"seed"}},
  };
  return s;
}

RunConfig from_tree(const pt::ptree& tree) {
  for (const auto& [section, body] : tree) {
    const auto it = schema().find(section);
    if (it == schema().end()) throw UsageError("unknown config section [" + section + "]");
    if (!body.data().empty()) throw UsageError("key outside a section: " + section);
    for (const auto& [key, _] : body)
      if (!it->second.count(key)) throw UsageError("unknown key " + section + "." + key);
  }
  auto get = [&](const char* path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return *v;
    return std::nullopt;
  };

  RunConfig c;
  if (auto v = get("group.id")) c.group_id = *v;
  if (auto v = get("domain.shape")) c.shape = one_of("domain.shape", *v, {"box", "ball"});
  if (auto v = get("domain.lower")) c.lower = parse_list(*v);
  if (auto v = get("domain.upper")) c.upper = parse_list(*v);
  if (auto v = get("domain.center")) c.center = parse_list(*v);
  if (auto v = get("domain.radius")) c.radius = to_double("domain.radius", *v);
  if (auto v = get("domain.halo_width")) {
    if (*v == "eps") c.halo_tracks_eps = true;
    else c.halo_width = to_double("domain.halo_width", *v);
  }
  if (auto v = get("datum.psi")) c.psi = *v;
  if (auto v = get("datum.reference")) c.reference = *v;
  if (auto v = get("sweep.eps")) c.eps = parse_list(*v);
  if (auto v = get("sweep.rho")) c.rho = to_double("sweep.rho", *v);
  if (auto v = get("sweep.region")) c.region = one_of("sweep.region", *v, {"omega_m", "omega_1"});
  if (auto v = get("sweep.artifacts")) c.artifacts = one_of("sweep.artifacts", *v, {"none", "solution", "all"});
  if (auto v = get("solver.max_iter")) c.solver.max_iter = to_count("solver.max_iter", *v);
  if (auto v = get("solver.tol")) c.solver.tol = to_double("solver.tol", *v);
  if (auto v = get("solver.step_rule")) {
    c.solver.step_rule = one_of("solver.step_rule", *v, {"adaptive", "constant"}) == "adaptive"
                             ? SolveParams::StepRule::AdaptiveRestart
                             : SolveParams::StepRule::Constant;
  }
  if (auto v = get("solver.check_every")) c.solver.check_every = to_count("solver.check_every", *v);
  if (auto v = get("solver.power_iterations"))
    c.solver.power_iterations = static_cast<int>(to_count("solver.power_iterations", *v));
  if (auto v = get("solver.warm_start")) c.solver.warm_start = to_bool("solver.warm_start", *v);
  if (auto v = get("solver.certificate_tol")) c.certificate_tol = to_double("solver.certificate_tol", *v);
  if (auto v = get("oracle.mincut")) c.mincut = one_of("oracle.mincut", *v, {"auto", "on", "off"});
  if (auto v = get("oracle.mincut_tol")) c.mincut_tol = to_double("oracle.mincut_tol", *v);
  if (auto v = get("oracle.p_list")) c.p_list = parse_list(*v);
  if (auto v = get("oracle.p_tol")) c.p_tol = to_double("oracle.p_tol", *v);
  if (auto v = get("oracle.p_max_iter")) c.p_max_iter = to_count("oracle.p_max_iter", *v);
  if (auto v = get("run.seed")) c.seed = to_count("run.seed", *v);
  return c;
}

}  // namespace

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) out.push_back(to_double("list", token));
    token.clear();
  };
  for (char ch : text) {
    if (ch == ' ' || ch == ',' || ch == ';' || ch == '\t') flush();
    else token.push_back(ch);
  }
  flush();
  return out;
}

RunConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  RunConfig c = from_tree(tree);
  resolve(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(std::string("config: ") + e.what());
  }
  RunConfig c = from_tree(tree);
  resolve(c);
  return c;
}

CarnotGroup make_group(const std::string& id) {
  try {
    return CarnotGroup::from_id(id);
  } catch (const std::invalid_argument&) {
    throw UsageError("unknown group id \"" + id + "\"");
  }
}

void resolve(RunConfig& c) {
  const CarnotGroup group = make_group(c.group_id);
  const auto n = static_cast<std::size_t>(group.dimension());
  if (c.shape == "box") {
    if (c.lower.size() != n || c.upper.size() != n)
      throw UsageError("domain.lower and domain.upper need " + std::to_string(n) + " entries");
    for (std::size_t k = 0; k < n; ++k)
      if (!(c.lower[k] < c.upper[k])) throw UsageError("domain.lower must be below domain.upper");
  } else {
    if (c.center.size() != n) throw UsageError("domain.center needs " + std::to_string(n) + " entries");
    if (!(c.radius > 0)) throw UsageError("domain.radius must be positive");
  }
  for (std::size_t k = 0; k < c.eps.size(); ++k) {
    if (!(c.eps[k] > 0)) throw UsageError("eps entries must be positive");
    if (k > 0 && !(c.eps[k] < c.eps[k - 1])) throw UsageError("eps list must be strictly decreasing");
  }
  if (!(c.rho >= 2)) throw UsageError("sweep.rho must be at least 2");
  if (!(c.solver.tol > 0)) throw UsageError("solver.tol must be positive");
  if (c.solver.max_iter == 0) throw UsageError("solver.max_iter must be positive");
  if (c.solver.check_every == 0) throw UsageError("solver.check_every must be positive");
  for (double p : c.p_list)
    if (!(p > 1.0 && p <= 3.0)) throw UsageError("oracle.p_list entries must lie in (1, 3]");
  if (!c.halo_tracks_eps && c.halo_width == 0.0 && !c.eps.empty()) c.halo_width = c.eps.front();
  if (!c.halo_tracks_eps && !c.eps.empty() && c.halo_width < c.eps.front())
    throw UsageError("domain.halo_width must be at least the largest eps");
  Expression::parse(c.psi, group.dimension());
  if (!c.reference.empty()) Expression::parse(c.reference, group.dimension());
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  using json = nlohmann::ordered_json;
  json domain = {{"shape", c.shape}};
  if (c.shape == "box") {
    domain["lower"] = c.lower;
    domain["upper"] = c.upper;
  } else {
    domain["center"] = c.center;
    domain["radius"] = c.radius;
  }
  if (c.halo_tracks_eps) domain["halo_width"] = "eps";
  else domain["halo_width"] = c.halo_width;
  return json{
      {"group", {{"id", c.group_id}}},
      {"domain", domain},
      {"datum", {{"psi", c.psi}, {"reference", c.reference}}},
      {"sweep", {{"eps", c.eps}, {"rho", c.rho}, {"region", c.region}, {"artifacts", c.artifacts}}},
      {"solver",
       {{"max_iter", c.solver.max_iter},
        {"tol", c.solver.tol},
        {"step_rule", c.solver.step_rule == SolveParams::StepRule::AdaptiveRestart ? "adaptive" : "constant"},
        {"check_every", c.solver.check_every},
        {"power_iterations", c.solver.power_iterations},
        {"warm_start", c.solver.warm_start},
        {"certificate_tol", c.certificate_tol}}},
      {"oracle",
       {{"mincut", c.mincut},
        {"mincut_tol", c.mincut_tol},
        {"p_list", c.p_list},
        {"p_tol", c.p_tol},
        {"p_max_iter", c.p_max_iter}}},
      {"run", {{"seed", c.seed}}},
  };
}

std::string run_id(const RunConfig& c) {
  const std::string text = to_json(c).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha1(), nullptr) != 1)
    throw std::runtime_error("SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

DomainSpec make_domain(const RunConfig& c, const CarnotGroup& group) {
  const double width = c.halo_tracks_eps ? (c.eps.empty() ? 1.0 : c.eps.front()) : c.halo_width;
  if (c.shape == "box") return DomainSpec::box(c.lower, c.upper, width);
  (void)group;
  return DomainSpec::box_ball(GroupPoint(std::span<const double>(c.center)), c.radius, width);
}

BoundaryDatum make_datum(const RunConfig& c, const CarnotGroup& group) {
  auto e = Expression::parse(c.psi, group.dimension());
  return BoundaryDatum([e](std::span<const double> x) { return e(x); }, c.psi);
}

SweepPlan make_plan(const RunConfig& c) {
  SweepPlan plan;
  plan.group = make_group(c.group_id);
  plan.domain = make_domain(c, plan.group);
  plan.psi = make_datum(c, plan.group);
  plan.eps = c.eps;
  plan.rho = c.rho;
  plan.halo_tracks_eps = c.halo_tracks_eps;
  plan.solver = c.solver;
  plan.solver.seed = c.seed;
  plan.region = c.region == "omega_1" ? EstimateRegion::Omega1 : EstimateRegion::OmegaM;
  if (!c.reference.empty()) {
    auto ref = Expression::parse(c.reference, plan.group.dimension());
    plan.reference = [ref](std::span<const double> x) { return ref(x); };
  }
  return plan;
}

}  // namespace lgp::runner

#include "config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace bltt::cli {

std::string_view to_string(Solver s) {
  switch (s) {
  case Solver::Abac: return "abac";
  case Solver::BlockCirculant: return "block-circulant";
  case Solver::None: return "none";
  }
  return "?";
}

Solver parse_solver(std::string_view name) {
  for (auto s : {Solver::Abac, Solver::BlockCirculant, Solver::None})
    if (to_string(s) == name) return s;
  throw std::invalid_argument("unknown solver '" + std::string(name) +
                              "' (expected abac, block-circulant or none)");
}

ProblemSpec ProblemConfig::resolve(std::size_t mp1, std::size_t n) const {
  ProblemSpec s;
  if (example) {
    switch (*example) {
    case 1: s = example1(family_set ? family : Family::HeatBdf, mp1, n); break;
    case 2: s = example2(mp1, n); break;
    case 3: s = example3(gamma, mp1, n); break;
    case 4: s = example4(gamma, mp1, n); break;
    default: throw std::invalid_argument("example must be 1, 2, 3 or 4");
    }
  } else {
    if (mp1 < 2) throw std::invalid_argument("m_plus_1 must be at least 2");
    s.family = family;
    s.m = mp1 - 1;
    s.steps = n;
    s.gamma = gamma;
  }
  if (dims) s.dims = *dims;
  if (horizon) s.horizon = *horizon;
  if (domain) {
    s.lo = domain->first;
    s.hi = domain->second;
  }
  if (coefficient) s.coefficient = *coefficient;
  if (forcing) s.forcing = *forcing;
  return s;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.minres.convention = ResidualConvention::TrueRelative;
  return cfg;
}

namespace {

class Parser {
public:
  explicit Parser(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& msg) const {
    std::ostringstream os;
    os << source_;
    const YAML::Mark mark = node.Mark();
    if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << msg;
    throw ConfigError(os.str());
  }

  void expect_map(const YAML::Node& node, const std::string& where) const {
    if (!node.IsMap()) fail(node, "'" + where + "' must be a mapping");
  }

  void check_keys(const YAML::Node& node, const std::string& where,
                  const std::set<std::string>& allowed) const {
    expect_map(node, where);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in '" + where + "'");
    }
  }

  template <typename T>
  T value(const YAML::Node& node, const std::string& what) const {
    if (!node.IsScalar()) fail(node, "'" + what + "' must be a scalar");
    try {
      return node.as<T>();
    } catch (const YAML::BadConversion&) {
      fail(node, "'" + what + "' has an invalid value '" + node.Scalar() + "'");
    }
  }

  std::size_t count(const YAML::Node& node, const std::string& what, long long min) const {
    const auto v = value<long long>(node, what);
    if (v < min) fail(node, "'" + what + "' must be at least " + std::to_string(min));
    return static_cast<std::size_t>(v);
  }

  double positive(const YAML::Node& node, const std::string& what) const {
    const auto v = value<double>(node, what);
    if (!(v > 0.0)) fail(node, "'" + what + "' must be positive");
    return v;
  }

  template <typename F>
  auto named(const YAML::Node& node, const std::string& what, F parse) const {
    const auto text = value<std::string>(node, what);
    try {
      return parse(text);
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

  void problem(const YAML::Node& node, ProblemConfig& p) const {
    check_keys(node, "problem",
               {"example", "family", "m_plus_1", "steps", "gamma", "dims", "horizon", "domain",
                "coefficient", "forcing"});
    if (auto n = node["example"]) {
      const auto e = value<int>(n, "problem.example");
      if (e < 1 || e > 4) fail(n, "'problem.example' must be 1, 2, 3 or 4");
      p.example = e;
    }
    if (auto n = node["family"]) {
      p.family = named(n, "problem.family", parse_family);
      p.family_set = true;
    }
    if (auto n = node["m_plus_1"]) p.m_plus_1 = count(n, "problem.m_plus_1", 2);
    if (auto n = node["steps"]) p.steps = count(n, "problem.steps", 1);
    if (auto n = node["gamma"]) {
      p.gamma = value<double>(n, "problem.gamma");
      if (!(p.gamma > 0.0 && p.gamma < 1.0)) fail(n, "'problem.gamma' must lie in (0, 1)");
    }
    if (auto n = node["dims"]) {
      const auto d = value<int>(n, "problem.dims");
      if (d != 1 && d != 2) fail(n, "'problem.dims' must be 1 or 2");
      p.dims = d;
    }
    if (auto n = node["horizon"]) p.horizon = positive(n, "problem.horizon");
    if (auto n = node["domain"]) {
      if (!n.IsSequence() || n.size() != 2) fail(n, "'problem.domain' must be [lo, hi]");
      const double lo = value<double>(n[0], "problem.domain[0]");
      const double hi = value<double>(n[1], "problem.domain[1]");
      if (!(hi > lo)) fail(n, "'problem.domain' needs lo < hi");
      p.domain = std::make_pair(lo, hi);
    }
    if (auto n = node["coefficient"]) {
      Coefficient c;
      if (n.IsMap()) {
        check_keys(n, "problem.coefficient", {"kind", "value"});
        if (auto k = n["kind"]) c.kind = named(k, "problem.coefficient.kind", parse_coefficient);
        if (auto v = n["value"]) c.value = positive(v, "problem.coefficient.value");
      } else {
        double v = 0.0;
        if (YAML::convert<double>::decode(n, v)) {
          if (!(v > 0.0)) fail(n, "'problem.coefficient' must be positive");
          c.value = v;
        } else {
          c.kind = named(n, "problem.coefficient", parse_coefficient);
        }
      }
      p.coefficient = c;
    }
    if (auto n = node["forcing"]) p.forcing = named(n, "problem.forcing", parse_heat_forcing);
    try {
      p.resolve().validate();
    } catch (const std::invalid_argument& e) {
      fail(node, e.what());
    }
  }

  void solver(const YAML::Node& node, MinresConfig& m) const {
    check_keys(node, "solver", {"tol", "max_iter", "convention", "record_history"});
    if (auto n = node["tol"]) m.tol = positive(n, "solver.tol");
    if (auto n = node["max_iter"]) m.max_iter = count(n, "solver.max_iter", 1);
    if (auto n = node["convention"])
      m.convention = named(n, "solver.convention", parse_residual_convention);
    if (auto n = node["record_history"]) m.record_history = value<bool>(n, "solver.record_history");
  }

  void preconditioner(const YAML::Node& node, RunConfig& cfg) const {
    check_keys(node, "preconditioner", {"kind", "alpha"});
    if (auto n = node["kind"]) cfg.solver = named(n, "preconditioner.kind", parse_solver);
    if (auto n = node["alpha"]) {
      cfg.alpha = value<double>(n, "preconditioner.alpha");
      if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) fail(n, "'preconditioner.alpha' must lie in (0, 1]");
    }
  }

  void output(const YAML::Node& node, OutputConfig& o) const {
    check_keys(node, "output", {"report", "history", "solution", "table", "bounds"});
    if (auto n = node["report"]) o.report = value<std::string>(n, "output.report");
    if (auto n = node["history"]) o.history = value<std::string>(n, "output.history");
    if (auto n = node["solution"]) o.solution = value<std::string>(n, "output.solution");
    if (auto n = node["table"]) o.table = value<std::string>(n, "output.table");
    if (auto n = node["bounds"]) o.bounds = value<std::string>(n, "output.bounds");
  }

  void bench(const YAML::Node& node, BenchConfig& b) const {
    check_keys(node, "bench", {"sizes", "solvers", "cap", "parallel"});
    if (auto n = node["sizes"]) {
      if (!n.IsSequence()) fail(n, "'bench.sizes' must be a list of [N, m_plus_1] pairs");
      b.sizes.clear();
      for (const auto& item : n) {
        if (item.IsSequence() && item.size() == 2) {
          b.sizes.emplace_back(count(item[0], "bench.sizes N", 1),
                               count(item[1], "bench.sizes m_plus_1", 2));
        } else if (item.IsMap()) {
          check_keys(item, "bench.sizes", {"N", "m_plus_1"});
          if (!item["N"] || !item["m_plus_1"]) fail(item, "bench size needs N and m_plus_1");
          b.sizes.emplace_back(count(item["N"], "bench.sizes N", 1),
                               count(item["m_plus_1"], "bench.sizes m_plus_1", 2));
        } else {
          fail(item, "bench size must be [N, m_plus_1] or {N: .., m_plus_1: ..}");
        }
      }
    }
    if (auto n = node["solvers"]) {
      if (!n.IsSequence()) fail(n, "'bench.solvers' must be a list");
      b.solvers.clear();
      for (const auto& item : n) b.solvers.push_back(named(item, "bench.solvers", parse_solver));
    }
    if (auto n = node["cap"]) b.cap = count(n, "bench.cap", 1);
    if (auto n = node["parallel"]) b.parallel = count(n, "bench.parallel", 1);
  }

  void spectrum(const YAML::Node& node, SpectrumConfig& s) const {
    check_keys(node, "spectrum", {"operator_csv", "delta"});
    if (auto n = node["operator_csv"]) s.operator_csv = value<std::string>(n, "spectrum.operator_csv");
    if (auto n = node["delta"]) {
      s.delta = value<double>(n, "spectrum.delta");
      if (!(s.delta > 0.0 && s.delta < 1.0)) fail(n, "'spectrum.delta' must lie in (0, 1)");
    }
  }

  void oracle(const YAML::Node& node, OracleConfig& o) const {
    check_keys(node, "oracle", {"seed", "sizes"});
    if (auto n = node["seed"]) o.seed = static_cast<std::uint64_t>(count(n, "oracle.seed", 0));
    if (auto n = node["sizes"]) {
      if (!n.IsSequence()) fail(n, "'oracle.sizes' must be a list of [m, dims, N]");
      o.sizes.clear();
      for (const auto& item : n) {
        if (!item.IsSequence() || item.size() != 3) fail(item, "oracle size must be [m, dims, N]");
        SuiteSize s{count(item[0], "oracle size m", 1), static_cast<int>(count(item[1], "oracle size dims", 1)),
                    count(item[2], "oracle size N", 1)};
        if (s.dims > 2) fail(item[1], "oracle size dims must be 1 or 2");
        o.sizes.push_back(s);
      }
    }
  }

  RunConfig run(const YAML::Node& root) const {
    RunConfig cfg = default_config();
    if (root.IsNull()) return cfg;
    check_keys(root, "top level",
               {"problem", "solver", "preconditioner", "output", "bench", "spectrum", "oracle"});
    if (auto n = root["problem"]) problem(n, cfg.problem);
    if (auto n = root["solver"]) solver(n, cfg.minres);
    if (auto n = root["preconditioner"]) preconditioner(n, cfg);
    if (auto n = root["output"]) output(n, cfg.output);
    if (auto n = root["bench"]) bench(n, cfg.bench);
    if (auto n = root["spectrum"]) spectrum(n, cfg.spectrum);
    if (auto n = root["oracle"]) oracle(n, cfg.oracle);
    return cfg;
  }

private:
  std::string source_;
};

} // namespace

RunConfig parse_config(std::string_view text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    std::ostringstream os;
    os << source << ':' << e.mark.line + 1 << ':' << e.mark.column + 1 << ": " << e.msg;
    throw ConfigError(os.str());
  }
  return Parser(source).run(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path);
}

void validate(const RunConfig& cfg) {
  if (!(cfg.alpha > 0.0 && cfg.alpha <= 1.0)) throw ConfigError("alpha must lie in (0, 1]");
  if (!(cfg.minres.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.minres.max_iter < 1) throw ConfigError("max-iter must be at least 1");
  if (cfg.bench.parallel < 1) throw ConfigError("parallel must be at least 1");
  try {
    cfg.problem.resolve().validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
}

} // namespace bltt::cli

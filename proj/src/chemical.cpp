#include <algorithm>
#include <cmath>

#include "lagflow/benchmarks.hpp"
#include "lagflow/parallel.hpp"

namespace lagflow {

namespace {

constexpr int kVars = 48;

// coef * x_a * x_b, or coef * x_a when b == 0 (variables numbered from 1).
struct Term {
  double coef;
  int a;
  int b;
};

struct Equation {
  double constant;
  std::vector<Term> terms;
};

const std::vector<Equation>& equations() {
  static const std::vector<Equation> eqs = {
    {-300, {{1, 4, 0}, {1, 3, 0}, {1, 2, 0}, {1, 1, 0}}},
    {0, {{1, 6, 0}, {-1, 8, 0}, {-1, 7, 0}}},
    {0, {{1, 9, 0}, {-1, 12, 0}, {-1, 10, 0}, {-1, 11, 0}}},
    {0, {{1, 14, 0}, {-1, 17, 0}, {-1, 15, 0}, {-1, 16, 0}}},
    {0, {{1, 18, 0}, {-1, 20, 0}, {-1, 19, 0}}},
    {0, {{1, 6, 21}, {-1, 24, 25}}},
    {0, {{1, 14, 22}, {-1, 26, 27}}},
    {0, {{1, 9, 23}, {-1, 28, 29}}},
    {0, {{1, 18, 30}, {-1, 31, 32}}},
    {0, {{1, 25, 0}, {-1, 5, 33}}},
    {0, {{1, 29, 0}, {-1, 5, 34}}},
    {0, {{1, 35, 0}, {-1, 5, 36}}},
    {0, {{1, 37, 0}, {-1, 13, 38}}},
    {0, {{1, 27, 0}, {-1, 13, 39}}},
    {0, {{1, 32, 0}, {-1, 13, 40}}},
    {0, {{1, 25, 0}, {-1, 6, 21}, {-1, 9, 41}}},
    {0, {{1, 29, 0}, {-1, 6, 42}, {-1, 9, 23}}},
    {0, {{1, 35, 0}, {-1, 6, 43}, {-1, 9, 44}}},
    {0, {{1, 37, 0}, {-1, 14, 45}, {-1, 18, 46}}},
    {0, {{1, 27, 0}, {-1, 14, 22}, {-1, 18, 47}}},
    {0, {{1, 32, 0}, {-1, 14, 48}, {-1, 18, 30}}},
    {0, {{0.33, 1, 0}, {1, 15, 45}, {-1, 25, 0}}},
    {0, {{0.33, 1, 0}, {1, 15, 22}, {-1, 29, 0}}},
    {0, {{0.33, 1, 0}, {1, 15, 48}, {-1, 35, 0}}},
    {0, {{0.33, 2, 0}, {1, 10, 41}, {-1, 37, 0}}},
    {0, {{0.33, 2, 0}, {1, 10, 23}, {-1, 27, 0}}},
    {0, {{0.33, 2, 0}, {1, 10, 44}, {-1, 32, 0}}},
    {-30, {{0.33, 3, 0}, {1, 7, 21}, {1, 11, 41}, {1, 16, 45}, {1, 19, 46}}},
    {-50, {{0.33, 3, 0}, {1, 7, 42}, {1, 11, 23}, {1, 16, 22}, {1, 19, 47}}},
    {-30, {{0.33, 3, 0}, {1, 7, 43}, {1, 11, 44}, {1, 16, 48}, {1, 19, 30}}},
    {-1, {{1, 33, 0}, {1, 34, 0}, {1, 36, 0}}},
    {-1, {{1, 21, 0}, {1, 42, 0}, {1, 43, 0}}},
    {-1, {{1, 41, 0}, {1, 23, 0}, {1, 44, 0}}},
    {-1, {{1, 38, 0}, {1, 39, 0}, {1, 40, 0}}},
    {-1, {{1, 45, 0}, {1, 22, 0}, {1, 48, 0}}},
    {-1, {{1, 46, 0}, {1, 47, 0}, {1, 30, 0}}},
    {0, {{1, 43, 0}}},
    {0, {{1, 46, 0}}},
  };
  return eqs;
}

constexpr double c11 = 0.23947, c12 = 0.75835;
constexpr double c21 = -0.0139904, c22 = -0.0661588;
constexpr double c31 = 0.0093514, c32 = 0.0338147;
constexpr double c41 = 0.0077308, c42 = 0.0373349;
constexpr double c51 = -0.0005719, c52 = 0.0016371;
constexpr double c61 = 0.0042656, c62 = 0.0288996;

}  // namespace

ProblemDef chemical_base() {
  ProblemDef p;
  p.n = kVars;
  p.m = static_cast<int>(equations().size());
  p.label = "chemical";
  p.cost = [](const Vector& v) {
    auto x = [&](int i) { return v[i - 1]; };
    return c11 + (c21 + c31 * x(24) + c41 * x(28) + c51 * x(33) + c61 * x(34)) * x(5) + c12 +
           (c22 + c32 * x(26) + c42 * x(31) + c52 * x(38) + c62 * x(39)) * x(13);
  };
  p.grad = [](const Vector& v) -> Vector {
    auto x = [&](int i) { return v[i - 1]; };
    Vector g = Vector::Zero(kVars);
    auto at = [&](int i) -> double& { return g[i - 1]; };
    at(5) = c21 + c31 * x(24) + c41 * x(28) + c51 * x(33) + c61 * x(34);
    at(24) = c31 * x(5);
    at(28) = c41 * x(5);
    at(33) = c51 * x(5);
    at(34) = c61 * x(5);
    at(13) = c22 + c32 * x(26) + c42 * x(31) + c52 * x(38) + c62 * x(39);
    at(26) = c32 * x(13);
    at(31) = c42 * x(13);
    at(38) = c52 * x(13);
    at(39) = c62 * x(13);
    return g;
  };
  p.constraints = [](const Vector& v) -> Vector {
    const auto& eqs = equations();
    Vector h(eqs.size());
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      double s = eqs[r].constant;
      for (const Term& t : eqs[r].terms) {
        s += t.b == 0 ? t.coef * v[t.a - 1] : t.coef * v[t.a - 1] * v[t.b - 1];
      }
      h[r] = s;
    }
    return h;
  };
  p.jacobian = [](const Vector& v) -> Matrix {
    const auto& eqs = equations();
    Matrix J = Matrix::Zero(eqs.size(), kVars);
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      for (const Term& t : eqs[r].terms) {
        if (t.b == 0) {
          J(r, t.a - 1) += t.coef;
        } else {
          J(r, t.a - 1) += t.coef * v[t.b - 1];
          J(r, t.b - 1) += t.coef * v[t.a - 1];
        }
      }
    }
    return J;
  };
  p.lagrangian_hessian = [](const Vector&, const Vector& lambda) -> Matrix {
    Matrix H = Matrix::Zero(kVars, kVars);
    auto add = [&](int a, int b, double c) {
      H(a - 1, b - 1) += c;
      H(b - 1, a - 1) += c;
    };
    add(5, 24, c31);
    add(5, 28, c41);
    add(5, 33, c51);
    add(5, 34, c61);
    add(13, 26, c32);
    add(13, 31, c42);
    add(13, 38, c52);
    add(13, 39, c62);
    const auto& eqs = equations();
    for (std::size_t r = 0; r < eqs.size(); ++r) {
      for (const Term& t : eqs[r].terms) {
        if (t.b != 0) add(t.a, t.b, t.coef * lambda[r]);
      }
    }
    return H;
  };
  return p;
}

std::vector<Bound> chemical_bounds() {
  std::vector<Bound> bounds;
  auto both = [&](std::initializer_list<int> vars, double lo, double hi) {
    for (int i : vars) bounds.push_back({i - 1, lo, hi});
  };
  for (int i = 1; i <= 20; ++i) bounds.push_back({i - 1, 0.0, 150.0});
  both({21, 22, 23, 30, 33, 34, 36, 38, 39, 40, 42, 43, 44, 45, 46, 47, 48}, 0.0, 1.0);
  both({24, 26, 28, 31}, 0.85, 1.0);
  both({25, 27, 29, 32, 35, 37}, 0.0, 30.0);
  std::sort(bounds.begin(), bounds.end(),
            [](const Bound& a, const Bound& b) { return a.index < b.index; });
  return bounds;
}

ChemicalProblem make_chemical() {
  ChemicalProblem c;
  c.transform.base = chemical_base();
  c.transform.bounds = chemical_bounds();
  c.lifted = lift_with_slacks(c.transform);
  return c;
}

PointSampler chemical_interior_sampler(const ChemicalProblem& c) {
  const SlackTransform t = c.transform;
  return [t](std::mt19937_64& rng) -> Vector {
    std::uniform_real_distribution<double> unit(0.02, 0.98);
    Vector x(t.base.n);
    std::vector<bool> seen(t.base.n, false);
    for (const Bound& b : t.bounds) {
      x[b.index] = b.lower + unit(rng) * (b.upper - b.lower);
      seen[b.index] = true;
    }
    for (int i = 0; i < t.base.n; ++i) {
      if (!seen[i]) x[i] = 2.0 * unit(rng) - 1.0;
    }
    return t.lift_point(x);
  };
}

ChemicalResult run_chemical(const ChemicalConfig& cfg) {
  const ChemicalProblem chem = make_chemical();
  const ProblemDef& p = chem.lifted;
  IntegratorConfig ic;
  ic.method = Method::Euler;
  ic.dt = cfg.dt;
  ic.t_max = cfg.t_max;
  ic.stop_constraint_tol = cfg.feasibility_tol;
  ic.record_stride = cfg.record_stride;
  const GainConfig g = GainConfig::uniform_fl(p.m, cfg.gain);

  ChemicalResult res;
  res.config = cfg;
  res.runs.resize(cfg.runs);
  parallel_for(cfg.runs, cfg.threads, [&](int r) {
    std::mt19937_64 rng = stream_rng(cfg.seed, 0xc4e3, static_cast<std::uint64_t>(r));
    std::uniform_real_distribution<double> init(0.0, cfg.init_high);
    const Vector x0 = Vector::NullaryExpr(kVars, [&] { return init(rng); });
    JointState z0;
    // The whole lifted state starts in [0, init_high], slacks drawn after x.
    z0.x.resize(p.n);
    z0.x.head(kVars) = x0;
    for (int k = kVars; k < p.n; ++k) z0.x[k] = init(rng);
    z0.lambda = Vector::Zero(p.m);

    ChemicalRun run;
    run.run = r;
    run.report = integrate(p, Controller::FL, g, z0, ic);
    const Vector& x = run.report.final_state.x;
    run.final_hinf = run.report.final_hinf;
    run.objective = x.allFinite() ? p.f(x) : std::nan("");
    run.bounds_ok = x.allFinite() && chem.transform.bounds_satisfied(x, cfg.bound_tol);
    run.feasible = run.report.status != Status::Diverged && std::isfinite(run.final_hinf) &&
                   run.final_hinf <= cfg.feasibility_tol && run.bounds_ok;
    res.runs[r] = std::move(run);
  });

  std::vector<double> objs;
  for (const auto& run : res.runs) {
    if (run.feasible) objs.push_back(run.objective);
  }
  res.feasible = static_cast<int>(objs.size());
  if (objs.empty()) {
    res.best = res.mean = res.stddev = std::nan("");
    return res;
  }
  res.best = *std::min_element(objs.begin(), objs.end());
  double sum = 0.0;
  for (double v : objs) sum += v;
  res.mean = sum / objs.size();
  double var = 0.0;
  for (double v : objs) var += (v - res.mean) * (v - res.mean);
  res.stddev = objs.size() > 1 ? std::sqrt(var / (objs.size() - 1)) : 0.0;
  return res;
}

}  // namespace lagflow

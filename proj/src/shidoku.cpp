#include <cmath>

#include "lagflow/benchmarks.hpp"
#include "lagflow/parallel.hpp"

namespace lagflow {

namespace {

using Cell = std::pair<int, int>;

std::vector<std::array<Cell, 4>> shidoku_groups() {
  std::vector<std::array<Cell, 4>> groups;
  for (int j = 0; j < 4; ++j) groups.push_back({{{0, j}, {1, j}, {2, j}, {3, j}}});
  for (int i = 0; i < 4; ++i) groups.push_back({{{i, 0}, {i, 1}, {i, 2}, {i, 3}}});
  for (int bi : {0, 2}) {
    for (int bj : {0, 2}) {
      groups.push_back({{{bi, bj}, {bi, bj + 1}, {bi + 1, bj}, {bi + 1, bj + 1}}});
    }
  }
  return groups;
}

// Cell values: givens as constants, free cells from x.
struct Layout {
  Grid givens{};
  std::array<std::array<int, 4>, 4> index{};

  explicit Layout(const Grid& g) : givens(g) {
    int k = 0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) index[i][j] = g[i][j] != 0 ? -1 : k++;
  }
  double value(const Vector& x, int i, int j) const {
    return index[i][j] < 0 ? givens[i][j] : x[index[i][j]];
  }
};

bool backtrack(Grid& g, int pos, int& solutions, Grid& found) {
  if (pos == 16) {
    if (solutions++ == 0) found = g;
    return solutions > 1;
  }
  const int i = pos / 4, j = pos % 4;
  if (g[i][j] != 0) return backtrack(g, pos + 1, solutions, found);
  for (int v = 1; v <= 4; ++v) {
    bool ok = true;
    for (int t = 0; t < 4 && ok; ++t) ok = g[i][t] != v && g[t][j] != v;
    const int bi = i / 2 * 2, bj = j / 2 * 2;
    for (int a = bi; a < bi + 2 && ok; ++a)
      for (int b = bj; b < bj + 2 && ok; ++b) ok = g[a][b] != v;
    if (!ok) continue;
    g[i][j] = v;
    if (backtrack(g, pos + 1, solutions, found)) return true;
    g[i][j] = 0;
  }
  return false;
}

}  // namespace

Grid shidoku_givens() {
  Grid g{};
  g[0][1] = 1;
  g[0][3] = 4;
  g[2][0] = 2;
  g[2][3] = 3;
  return g;
}

std::vector<std::pair<int, int>> shidoku_free_cells(const Grid& givens) {
  std::vector<std::pair<int, int>> cells;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (givens[i][j] == 0) cells.emplace_back(i, j);
  return cells;
}

std::optional<Grid> shidoku_backtrack(const Grid& givens) {
  Grid g = givens;
  Grid found{};
  int solutions = 0;
  backtrack(g, 0, solutions, found);
  if (solutions != 1) return std::nullopt;
  return found;
}

ProblemDef make_shidoku(const Grid& givens) {
  const Layout layout(givens);
  const auto groups = shidoku_groups();
  const int n = static_cast<int>(shidoku_free_cells(givens).size());

  ProblemDef p;
  p.n = n;
  p.m = 2 * static_cast<int>(groups.size()) + 16;
  p.label = "shidoku";
  p.cost = [](const Vector&) { return 0.0; };
  p.grad = [n](const Vector&) -> Vector { return Vector::Zero(n); };
  p.constraints = [layout, groups, m = p.m](const Vector& x) -> Vector {
    Vector h(m);
    int r = 0;
    for (const auto& gr : groups) {
      double sum = 0.0, prod = 1.0;
      for (const auto& [i, j] : gr) {
        const double v = layout.value(x, i, j);
        sum += v;
        prod *= v;
      }
      h[r++] = sum - 10.0;
      h[r++] = prod - 24.0;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double v = layout.value(x, i, j);
        h[r++] = (v - 1.0) * (v - 2.0) * (v - 3.0) * (v - 4.0);
      }
    }
    return h;
  };
  p.jacobian = [layout, groups, n, m = p.m](const Vector& x) -> Matrix {
    Matrix J = Matrix::Zero(m, n);
    int r = 0;
    for (const auto& gr : groups) {
      for (int t = 0; t < 4; ++t) {
        const int col = layout.index[gr[t].first][gr[t].second];
        if (col < 0) continue;
        double others = 1.0;
        for (int s = 0; s < 4; ++s)
          if (s != t) others *= layout.value(x, gr[s].first, gr[s].second);
        J(r, col) = 1.0;
        J(r + 1, col) = others;
      }
      r += 2;
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j, ++r) {
        const int col = layout.index[i][j];
        if (col < 0) continue;
        const double v = x[col];
        double d = 0.0;
        for (int k = 1; k <= 4; ++k) {
          double q = 1.0;
          for (int l = 1; l <= 4; ++l)
            if (l != k) q *= v - l;
          d += q;
        }
        J(r, col) = d;
      }
    }
    return J;
  };
  return p;
}

Grid shidoku_decode(const Grid& givens, const Vector& x) {
  const Layout layout(givens);
  Grid g{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) g[i][j] = static_cast<int>(std::lround(layout.value(x, i, j)));
  return g;
}

bool shidoku_valid(const Grid& g) {
  for (const auto& gr : shidoku_groups()) {
    int seen = 0;
    for (const auto& [i, j] : gr) {
      const int v = g[i][j];
      if (v < 1 || v > 4) return false;
      seen |= 1 << v;
    }
    if (seen != 0b11110) return false;
  }
  return true;
}

ShidokuResult run_shidoku(const ShidokuConfig& cfg) {
  ShidokuResult res;
  res.config = cfg;
  const Grid givens = shidoku_givens();
  const auto oracle = shidoku_backtrack(givens);
  if (!oracle) {
    throw SolverError(ErrorCode::InvalidInput, "puzzle has no unique completion");
  }
  res.oracle = *oracle;
  const ProblemDef p = make_shidoku(givens);

  GainConfig g;
  g.kp = cfg.kp;
  g.ki = cfg.ki;
  IntegratorConfig ic;
  ic.method = Method::RK4;
  ic.dt = cfg.dt;
  ic.t_max = cfg.t_max;
  ic.record_stride = cfg.record_stride;

  res.runs.resize(cfg.runs);
  parallel_for(cfg.runs, cfg.threads, [&](int r) {
    std::mt19937_64 rng = stream_rng(cfg.seed, 0x5d0c, static_cast<std::uint64_t>(r));
    std::normal_distribution<double> normal(0.0, 1.0);
    JointState z0;
    z0.x = Vector::NullaryExpr(p.n, [&] { return std::abs(normal(rng)); });
    z0.lambda = Vector::NullaryExpr(p.m, [&] { return normal(rng); });

    ShidokuRun run;
    run.run = r;
    run.report = integrate(p, Controller::PI, g, z0, ic);
    const Vector& x = run.report.final_state.x;
    run.grid = shidoku_decode(givens, x);
    run.integral = x.allFinite();
    for (int i = 0; i < p.n && run.integral; ++i) {
      run.integral = std::abs(x[i] - std::round(x[i])) <= cfg.integer_tol;
    }
    run.matches_oracle = run.integral && run.grid == res.oracle;
    run.success = run.matches_oracle && shidoku_valid(run.grid) &&
                  run.report.final_hinf <= cfg.success_hinf;
    res.runs[r] = std::move(run);
  });

  double iters = 0.0;
  for (const auto& run : res.runs) {
    res.successes += run.success ? 1 : 0;
    iters += static_cast<double>(run.report.iterations);
  }
  res.mean_iterations = cfg.runs > 0 ? iters / cfg.runs : 0.0;
  return res;
}

}  // namespace lagflow

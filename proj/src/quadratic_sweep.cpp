#include <cmath>

#include "lagflow/benchmarks.hpp"
#include "lagflow/parallel.hpp"

namespace lagflow {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return std::mt19937_64(seq);
}

QuadraticProblem make_quadratic(int n, int m, std::uint64_t seed) {
  if (m < 1 || m > n) {
    throw SolverError(ErrorCode::InvalidInput, "make_quadratic needs 1 <= m <= n");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](int r, int c) { return Matrix(Matrix::NullaryExpr(r, c, [&] { return normal(rng); })); };

  QuadraticProblem q;
  const Matrix W0 = draw(n, n);
  q.W = 10.0 * Matrix::Identity(n, n) + W0 * W0.transpose();
  q.W = (0.5 * (q.W + q.W.transpose())).eval();
  do {
    q.C = draw(m, n);
  } while (Eigen::FullPivLU<Matrix>(q.C).rank() < m);
  q.d = draw(m, 1).col(0);
  return q;
}

SweepRun quadratic_sweep_run(const SweepConfig& cfg, int m, int run) {
  SweepRun r;
  r.m = m;
  r.run = run;
  std::mt19937_64 rng = stream_rng(cfg.seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(run));
  const std::uint64_t problem_seed = rng();
  const QuadraticProblem q = make_quadratic(cfg.n, m, problem_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Vector z0 = Vector::NullaryExpr(cfg.n + m, [&] { return normal(rng); });

  try {
    const KktSolution sol = kkt_oracle(q);
    Vector z_star(cfg.n + m);
    z_star << sol.x_star, sol.lambda_star;

    Eigen::SelfAdjointEigenSolver<Matrix> es(q.W, Eigen::EigenvaluesOnly);
    const double beta1 = es.eigenvalues()(0);
    const double beta2 = es.eigenvalues()(cfg.n - 1);
    r.kp = kp_from_ki(beta1, beta2, cfg.eta, cfg.branch).kp;

    auto solve = [&](double kp, double& dt, long& iters, bool& ok) {
      GainConfig g;
      g.kp = kp;
      g.ki = cfg.eta;
      const LTIStabilityReport lti = lti_closed_loop(q, g);
      dt = stable_step_size(lti.A, cfg.safety);
      const LtiEulerResult e = euler_lti(lti.A, lti.b, z0, z_star, dt, cfg.tol, cfg.max_iterations);
      iters = e.iterations;
      ok = e.converged;
    };
    solve(0.0, r.dt_pdgd, r.iters_pdgd, r.ok_pdgd);
    solve(r.kp, r.dt_pi, r.iters_pi, r.ok_pi);
  } catch (const SolverError& e) {
    r.error = e.what();
  }
  return r;
}

SweepResult quadratic_sweep(const SweepConfig& cfg) {
  SweepResult res;
  res.config = cfg;
  const int per_m = cfg.runs;
  const int total = per_m * static_cast<int>(cfg.m_values.size());
  res.runs.resize(total);
  parallel_for(total, cfg.threads, [&](int i) {
    res.runs[i] = quadratic_sweep_run(cfg, cfg.m_values[i / per_m], i % per_m);
  });

  for (std::size_t j = 0; j < cfg.m_values.size(); ++j) {
    SweepRow row;
    row.m = cfg.m_values[j];
    row.runs = per_m;
    double sum_pdgd = 0, sum_pi = 0, sum_kp = 0;
    int both = 0;
    for (int r = 0; r < per_m; ++r) {
      const SweepRun& run = res.runs[j * per_m + r];
      row.failures_pdgd += run.ok_pdgd ? 0 : 1;
      row.failures_pi += run.ok_pi ? 0 : 1;
      sum_kp += run.kp;
      if (run.ok_pdgd && run.ok_pi) {
        sum_pdgd += static_cast<double>(run.iters_pdgd);
        sum_pi += static_cast<double>(run.iters_pi);
        ++both;
      }
    }
    row.mean_kp = sum_kp / per_m;
    if (both > 0) {
      row.mean_pdgd = sum_pdgd / both;
      row.mean_pi = sum_pi / both;
      row.gain = 1.0 - row.mean_pi / row.mean_pdgd;
    } else {
      row.mean_pdgd = row.mean_pi = std::nan("");
      row.gain = std::nan("");
    }
    res.rows.push_back(row);
  }
  return res;
}

}  // namespace lagflow

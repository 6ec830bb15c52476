#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lagflow/analysis.hpp"
#include "lagflow/derivatives.hpp"
#include "lagflow/integrate.hpp"
#include "lagflow/slack.hpp"

namespace lagflow {

/// Independent generator for sub-stream (a, b) of a base seed.
std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

// ---------------------------------------------------------------- quadratic

/// W = 10 I + W0 W0^T; W0, C, d standard normal. C is redrawn if rank deficient.
QuadraticProblem make_quadratic(int n, int m, std::uint64_t seed);

struct SweepConfig {
  int n = 50;
  std::vector<int> m_values = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26};
  int runs = 400;
  double eta = 20.0;
  std::uint64_t seed = 7;
  double tol = 1e-6;
  double safety = 0.95;
  long max_iterations = 2000000;
  TuningBranch branch = TuningBranch::KiRhoPlusKpBeta2;
  int threads = 1;
};

struct SweepRun {
  int m = 0;
  int run = 0;
  double kp = 0.0;
  double dt_pdgd = 0.0;
  double dt_pi = 0.0;
  long iters_pdgd = 0;
  long iters_pi = 0;
  bool ok_pdgd = false;
  bool ok_pi = false;
  std::string error;
};

struct SweepRow {
  int m = 0;
  int runs = 0;
  int failures_pdgd = 0;
  int failures_pi = 0;
  double mean_pdgd = 0.0;
  double mean_pi = 0.0;
  double mean_kp = 0.0;
  /// 1 - mean_pi / mean_pdgd over runs where both methods converged.
  double gain = 0.0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<SweepRow> rows;
  std::vector<SweepRun> runs;
};

SweepRun quadratic_sweep_run(const SweepConfig& cfg, int m, int run);
SweepResult quadratic_sweep(const SweepConfig& cfg);

// ---------------------------------------------------------------- shidoku

using Grid = std::array<std::array<int, 4>, 4>;

/// Givens of the built-in puzzle; 0 marks a free cell.
Grid shidoku_givens();
/// Free cells, row-major, as (row, col).
std::vector<std::pair<int, int>> shidoku_free_cells(const Grid& givens);
/// Unique completion by backtracking; nullopt if none.
std::optional<Grid> shidoku_backtrack(const Grid& givens);

/// 12 unknowns, 40 equations: per column, row and 2x2 block a sum-10 and a
/// product-24 equation, then prod_k (v - k) = 0 for each of the 16 cells.
/// The cost is identically zero.
ProblemDef make_shidoku(const Grid& givens = shidoku_givens());
Grid shidoku_decode(const Grid& givens, const Vector& x);
bool shidoku_valid(const Grid& g);

struct ShidokuConfig {
  int runs = 20;
  std::uint64_t seed = 1;
  double kp = 0.1;
  double ki = 1.0;
  double dt = 6.6e-4;
  double t_max = 100.0;
  double success_hinf = 1e-6;
  double integer_tol = 1e-3;
  int threads = 1;
  int record_stride = 1000;
};

struct ShidokuRun {
  int run = 0;
  SolveReport report;
  Grid grid{};
  bool integral = false;
  bool matches_oracle = false;
  bool success = false;
};

struct ShidokuResult {
  ShidokuConfig config;
  Grid oracle{};
  std::vector<ShidokuRun> runs;
  int successes = 0;
  double mean_iterations = 0.0;
};

/// x0 = |xi|, lambda0 = N(0, 1), PI under RK4.
ShidokuResult run_shidoku(const ShidokuConfig& cfg);

// ---------------------------------------------------------------- sysid

struct SysIdData {
  int N = 0;
  Vector theta_true;
  Vector u;
  Vector y_true;
  Vector y_meas;
};

/// theta_true = (0.5, -0.3, -0.7, -0.35, 0.8).
Vector sysid_theta_true();

/// Decision vector (theta[5], y[N]); constraints for k = 3..N
///   y_k - t1 exp(-y_{k-1}^2) - t2 u_{k-1}^2 - t3 u_{k-2} y_{k-1} - t4 u_{k-2}^t5 = 0
/// and cost sum_k (y_k - y_meas_k)^2. u ~ U[0.2, 2.0].
struct SysIdProblem {
  ProblemDef problem;
  SysIdData data;
};
SysIdProblem make_sysid(int N, std::uint64_t seed, double noise_std = 0.01);
/// Builds the problem around given data. Throws InvalidInput if some u <= 0.
ProblemDef sysid_problem(const SysIdData& data);

struct SysIdConfig {
  int N = 400;
  std::uint64_t seed = 1;
  double noise_std = 0.01;
  double gain = 1.0;
  double dt = 1e-2;
  double t_max = 20.0;
  int record_stride = 10;
};

struct SysIdResult {
  SysIdConfig config;
  SolveReport report;
  Vector theta_hat;
  Vector theta_true;
  double theta_error = 0.0;
  double final_hinf = 0.0;
};

/// FL with all outer gains equal, Euler, every coordinate of x0 ~ N(0, 1).
SysIdResult run_sysid(const SysIdConfig& cfg);

// ---------------------------------------------------------------- chemical

struct ChemicalProblem {
  SlackTransform transform;
  ProblemDef lifted;
};

/// 48 variables, 38 bilinear equalities, 47 two-sided bounds lifted by
/// squared slacks to 142 variables and 132 equalities.
ProblemDef chemical_base();
std::vector<Bound> chemical_bounds();
ChemicalProblem make_chemical();
/// Base point uniform inside every bound, slacks lifted to match.
PointSampler chemical_interior_sampler(const ChemicalProblem& c);

struct ChemicalConfig {
  int runs = 50;
  std::uint64_t seed = 1;
  double gain = 10.0;
  double dt = 5e-5;
  double t_max = 3.0;
  double init_high = 50.0;
  double feasibility_tol = 1e-7;
  double bound_tol = 1e-6;
  int threads = 1;
  int record_stride = 1000;
};

struct ChemicalRun {
  int run = 0;
  SolveReport report;
  double objective = 0.0;
  double final_hinf = 0.0;
  bool bounds_ok = false;
  bool feasible = false;
};

struct ChemicalResult {
  ChemicalConfig config;
  std::vector<ChemicalRun> runs;
  int feasible = 0;
  double best = 0.0;
  double mean = 0.0;
  double stddev = 0.0;
};

ChemicalResult run_chemical(const ChemicalConfig& cfg);

}  // namespace lagflow

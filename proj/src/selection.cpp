#include "codedchain/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "codedchain/special.hpp"

namespace codedchain {

namespace {

constexpr double kTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Largest shape a with P(a, x) >= q; P(a, x) is strictly decreasing in a.
double gamma_shape_cap(double x, double q) {
  if (!(x > 0.0)) return 0.0;
  double lo = 1e-12;
  if (regularized_gamma(lo, x).p < q) return 0.0;
  double hi = std::max(2.0 * x, 16.0);
  int guard = 0;
  while (regularized_gamma(hi, x).p >= q) {
    hi *= 2.0;
    if (++guard > 200) throw std::runtime_error("gamma_shape_cap: no upper bracket");
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (regularized_gamma(mid, x).p >= q)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

// Positive root T of S - T = z * sqrt(omega * T).
double size_mean_cap(double s, double omega, double z) {
  const double u = 0.5 * (-z * std::sqrt(omega) +
                          std::sqrt(z * z * omega + 4.0 * s));
  return u * u;
}

bool row_satisfied(const BudgetRow& row, const std::vector<char>& pick) {
  double total = 0.0;
  for (std::size_t j = 0; j < pick.size(); ++j)
    if (pick[j]) total += row.coef[j];
  return total <= row.limit + kTol + std::fabs(row.limit) * 1e-12;
}

bool all_rows_satisfied(const LinearBudgets& budgets, const std::vector<char>& pick) {
  for (const auto& row : budgets.rows)
    if (!row_satisfied(row, pick)) return false;
  return true;
}

}  // namespace

LinearBudgets reduce_to_linear(const SelectionProblem& problem,
                               const std::vector<Transaction>& pool,
                               std::uint64_t epoch) {
  const std::size_t n = pool.size();
  LinearBudgets out;
  out.excluded.assign(n, 0);

  if (problem.mode == SelectionMode::kDeterministic) {
    BudgetRow compute{std::vector<double>(n), problem.compute_budget};
    BudgetRow size{std::vector<double>(n), problem.size_budget};
    for (std::size_t j = 0; j < n; ++j) {
      compute.coef[j] = pool[j].compute_cost;
      size.coef[j] = pool[j].size_bytes;
      if (current_depth(pool[j], epoch) > problem.depth_limit) out.excluded[j] = 1;
    }
    out.rows.push_back(std::move(compute));
    out.rows.push_back(std::move(size));
    out.empty_feasible =
        !(problem.compute_budget > 0.0) || !(problem.size_budget > 0.0);
    return out;
  }

  if (!(problem.q1 > 0.0 && problem.q1 < 1.0) ||
      !(problem.q2 > 0.0 && problem.q2 < 1.0) ||
      !(problem.q3 > 0.0 && problem.q3 < 1.0))
    throw std::invalid_argument("reduce_to_linear: confidence floors must be in (0,1)");
  if (!(problem.compute_scale > 0.0) || !(problem.size_omega > 0.0))
    throw std::invalid_argument("reduce_to_linear: scale parameters must be positive");

  const double shape_cap =
      gamma_shape_cap(problem.compute_budget / problem.compute_scale, problem.q1);
  const double mean_cap = size_mean_cap(problem.size_budget, problem.size_omega,
                                        normal_quantile(problem.q2));
  if (!(shape_cap > 0.0) || !(mean_cap > 0.0)) {
    out.empty_feasible = true;
    return out;
  }

  BudgetRow compute{std::vector<double>(n), shape_cap};
  BudgetRow size{std::vector<double>(n), mean_cap};
  BudgetRow depth{std::vector<double>(n), -std::log(problem.q3)};
  for (std::size_t j = 0; j < n; ++j) {
    compute.coef[j] = pool[j].compute_shape;
    size.coef[j] = pool[j].size_mean;
    const double lambda = pool[j].depth_mean;
    if (lambda <= 0.0) {
      depth.coef[j] = 0.0;
      continue;
    }
    const double q = regularized_gamma(static_cast<double>(problem.depth_limit) + 1.0,
                                       lambda).q;
    if (q <= 0.0) {
      // Certain depth violation; its log-term is infinite.
      out.excluded[j] = 1;
      depth.coef[j] = 0.0;
    } else {
      depth.coef[j] = -std::log(q);
    }
  }
  out.rows.push_back(std::move(compute));
  out.rows.push_back(std::move(size));
  out.rows.push_back(std::move(depth));
  return out;
}

namespace {

// Bounded-variable primal simplex for: max c.x, rows A x <= b, 0 <= x <= ub.
// Columns n..n+m-1 are slacks. Bland's rule for entering and leaving keeps
// it cycle-free; m <= 3 keeps every basis solve trivial.
class BoundedSimplex {
 public:
  BoundedSimplex(const std::vector<double>& c, const LinearBudgets& budgets)
      : n_(c.size()), m_(budgets.rows.size()), rows_(budgets.rows) {
    cost_.assign(n_ + m_, 0.0);
    upper_.assign(n_ + m_, 1.0);
    skip_.assign(n_ + m_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
      cost_[j] = c[j];
      if (budgets.excluded[j]) {
        upper_[j] = 0.0;
        skip_[j] = 1;
      }
    }
    for (std::size_t i = 0; i < m_; ++i) upper_[n_ + i] = kInf;

    basis_.resize(m_);
    for (std::size_t i = 0; i < m_; ++i) basis_[i] = n_ + i;
    in_basis_.assign(n_ + m_, 0);
    for (std::size_t i = 0; i < m_; ++i) in_basis_[n_ + i] = 1;
    at_upper_.assign(n_ + m_, 0);
  }

  LpSolution solve() {
    LpSolution sol;
    sol.x.assign(n_, 0.0);
    for (const auto& row : rows_) {
      if (row.limit < -kTol) {
        sol.feasible = false;
        return sol;
      }
    }

    constexpr int kMaxIterations = 200000;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      compute_basics();
      const std::vector<double> y = dual_prices();

      // Bland: smallest-index eligible entering column.
      std::size_t entering = n_ + m_;
      double entering_d = 0.0;
      for (std::size_t j = 0; j < n_ + m_; ++j) {
        if (in_basis_[j] || skip_[j]) continue;
        const double d = cost_[j] - dot_column(y, j);
        if (!at_upper_[j] && d > kTol) {
          entering = j;
          entering_d = d;
          break;
        }
        if (at_upper_[j] && d < -kTol) {
          entering = j;
          entering_d = d;
          break;
        }
      }
      if (entering == n_ + m_) break;  // optimal

      const double sigma = entering_d > 0.0 ? 1.0 : -1.0;
      const std::vector<double> w = basis_solve(column(entering));

      // Ratio test: entering moves sigma * t; basic i moves -sigma * w[i] * t.
      double t_best = upper_[entering] == kInf ? kInf : upper_[entering];
      std::size_t leaving = m_;  // m_ means the entering column flips bounds
      bool leaving_to_upper = false;
      for (std::size_t i = 0; i < m_; ++i) {
        const double delta = -sigma * w[i];
        if (delta < -kTol) {
          const double t = basic_value_[i] / (-delta);
          if (t < t_best - kTol ||
              (t < t_best + kTol && leaving != m_ && basis_[i] < basis_[leaving])) {
            t_best = t;
            leaving = i;
            leaving_to_upper = false;
          }
        } else if (delta > kTol && upper_[basis_[i]] != kInf) {
          const double t = (upper_[basis_[i]] - basic_value_[i]) / delta;
          if (t < t_best - kTol ||
              (t < t_best + kTol && leaving != m_ && basis_[i] < basis_[leaving])) {
            t_best = t;
            leaving = i;
            leaving_to_upper = true;
          }
        }
      }
      if (t_best == kInf)
        throw std::runtime_error("lp_relax_select: unbounded relaxation");

      if (leaving == m_) {
        at_upper_[entering] = !at_upper_[entering];
        continue;
      }
      const std::size_t out_var = basis_[leaving];
      in_basis_[out_var] = 0;
      at_upper_[out_var] = leaving_to_upper ? 1 : 0;
      basis_[leaving] = entering;
      in_basis_[entering] = 1;
      at_upper_[entering] = 0;
      if (iter + 1 == kMaxIterations)
        throw std::runtime_error("lp_relax_select: iteration limit");
    }

    compute_basics();
    for (std::size_t j = 0; j < n_; ++j) {
      if (in_basis_[j]) continue;
      sol.x[j] = at_upper_[j] ? upper_[j] : 0.0;
    }
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_)
        sol.x[basis_[i]] = std::clamp(basic_value_[i], 0.0, upper_[basis_[i]]);
    }
    sol.objective = 0.0;
    for (std::size_t j = 0; j < n_; ++j) sol.objective += cost_[j] * sol.x[j];
    return sol;
  }

 private:
  std::vector<double> column(std::size_t j) const {
    std::vector<double> col(m_, 0.0);
    if (j < n_) {
      for (std::size_t i = 0; i < m_; ++i) col[i] = rows_[i].coef[j];
    } else {
      col[j - n_] = 1.0;
    }
    return col;
  }

  double dot_column(const std::vector<double>& y, std::size_t j) const {
    if (j >= n_) return y[j - n_];
    double acc = 0.0;
    for (std::size_t i = 0; i < m_; ++i) acc += y[i] * rows_[i].coef[j];
    return acc;
  }

  // Gaussian elimination on the m x m basis matrix (m <= 3).
  std::vector<double> gauss(std::vector<std::vector<double>> a,
                            std::vector<double> rhs) const {
    const std::size_t m = rhs.size();
    for (std::size_t col = 0; col < m; ++col) {
      std::size_t pivot = col;
      for (std::size_t r = col + 1; r < m; ++r)
        if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
      if (std::fabs(a[pivot][col]) < 1e-13)
        throw std::runtime_error("lp_relax_select: singular basis");
      std::swap(a[col], a[pivot]);
      std::swap(rhs[col], rhs[pivot]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        if (f == 0.0) continue;
        for (std::size_t k = col; k < m; ++k) a[r][k] -= f * a[col][k];
        rhs[r] -= f * rhs[col];
      }
    }
    for (std::size_t i = 0; i < m; ++i) rhs[i] /= a[i][i];
    return rhs;
  }

  std::vector<double> basis_solve(const std::vector<double>& rhs) const {
    if (m_ == 0) return {};
    std::vector<std::vector<double>> B(m_, std::vector<double>(m_));
    for (std::size_t k = 0; k < m_; ++k) {
      const std::vector<double> col = column(basis_[k]);
      for (std::size_t i = 0; i < m_; ++i) B[i][k] = col[i];
    }
    return gauss(std::move(B), rhs);
  }

  std::vector<double> dual_prices() const {
    if (m_ == 0) return {};
    // Solve B^T y = c_B.
    std::vector<std::vector<double>> Bt(m_, std::vector<double>(m_));
    std::vector<double> cb(m_);
    for (std::size_t k = 0; k < m_; ++k) {
      const std::vector<double> col = column(basis_[k]);
      for (std::size_t i = 0; i < m_; ++i) Bt[k][i] = col[i];
      cb[k] = cost_[basis_[k]];
    }
    return gauss(std::move(Bt), std::move(cb));
  }

  void compute_basics() {
    std::vector<double> rhs(m_);
    for (std::size_t i = 0; i < m_; ++i) rhs[i] = rows_[i].limit;
    for (std::size_t j = 0; j < n_ + m_; ++j) {
      if (in_basis_[j] || !at_upper_[j]) continue;
      const std::vector<double> col = column(j);
      for (std::size_t i = 0; i < m_; ++i) rhs[i] -= col[i] * upper_[j];
    }
    basic_value_ = basis_solve(rhs);
  }

  std::size_t n_;
  std::size_t m_;
  std::vector<BudgetRow> rows_;
  std::vector<double> cost_;
  std::vector<double> upper_;
  std::vector<char> skip_;
  std::vector<std::size_t> basis_;
  std::vector<char> in_basis_;
  std::vector<char> at_upper_;
  std::vector<double> basic_value_;
};

}  // namespace

LpSolution lp_relax_select(const std::vector<double>& rewards,
                           const LinearBudgets& budgets) {
  const std::size_t n = rewards.size();
  if (budgets.excluded.size() != n)
    throw std::invalid_argument("lp_relax_select: exclusion mask size mismatch");
  for (const auto& row : budgets.rows)
    if (row.coef.size() != n)
      throw std::invalid_argument("lp_relax_select: budget row size mismatch");

  LpSolution sol;
  if (budgets.empty_feasible) {
    sol.x.assign(n, 0.0);
    sol.feasible = false;
    return sol;
  }
  if (budgets.rows.empty()) {
    sol.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
      if (!budgets.excluded[j] && rewards[j] > 0.0) {
        sol.x[j] = 1.0;
        sol.objective += rewards[j];
      }
    }
    return sol;
  }
  return BoundedSimplex(rewards, budgets).solve();
}

std::vector<char> randomized_round(const std::vector<double>& rewards,
                                   const LinearBudgets& budgets,
                                   const std::vector<double>& x,
                                   std::uint32_t trials, Rng& rng) {
  const std::size_t n = rewards.size();

  // Reward per unit of normalized load; dropping the smallest first repairs
  // an over-budget draw with the least objective damage.
  std::vector<double> density(n, kInf);
  for (std::size_t j = 0; j < n; ++j) {
    double load = 0.0;
    for (const auto& row : budgets.rows)
      load += row.coef[j] / std::max(row.limit, 1e-12);
    if (load > 0.0) density[j] = rewards[j] / load;
  }

  const auto repair = [&](std::vector<char>& pick) {
    for (;;) {
      bool violated = false;
      for (const auto& row : budgets.rows) {
        if (!row_satisfied(row, pick)) {
          violated = true;
          break;
        }
      }
      if (!violated) return;
      std::size_t worst = n;
      for (std::size_t j = 0; j < n; ++j) {
        if (!pick[j]) continue;
        if (worst == n || density[j] < density[worst]) worst = j;
      }
      if (worst == n) return;  // nothing left to drop
      pick[worst] = 0;
    }
  };

  const auto reward_of = [&](const std::vector<char>& pick) {
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (pick[j]) total += rewards[j];
    return total;
  };

  // Deterministic baseline: the integral part of the fractional solution,
  // feasible because it is dominated by x.
  std::vector<char> best(n, 0);
  for (std::size_t j = 0; j < n; ++j)
    if (!budgets.excluded[j] && x[j] >= 1.0 - 1e-9) best[j] = 1;
  if (!all_rows_satisfied(budgets, best)) repair(best);
  double best_reward = reward_of(best);

  std::vector<char> pick(n);
  for (std::uint32_t trial = 0; trial < trials; ++trial) {
    for (std::size_t j = 0; j < n; ++j)
      pick[j] = (!budgets.excluded[j] && x[j] > 0.0 && rng.bernoulli(x[j])) ? 1 : 0;
    repair(pick);
    const double reward = reward_of(pick);
    if (reward > best_reward) {
      best_reward = reward;
      best = pick;
    }
  }
  return best;
}

SelectionResult select_transactions(const SelectionProblem& problem,
                                    const std::vector<Transaction>& pool,
                                    const std::vector<double>& rewards,
                                    std::uint64_t epoch, std::uint32_t trials,
                                    Rng& rng) {
  SelectionResult result;
  const LinearBudgets budgets = reduce_to_linear(problem, pool, epoch);
  if (budgets.empty_feasible) {
    result.chosen.assign(pool.size(), 0);
    result.empty_feasible = true;
    return result;
  }
  const LpSolution lp = lp_relax_select(rewards, budgets);
  if (!lp.feasible) {
    result.chosen.assign(pool.size(), 0);
    result.empty_feasible = true;
    return result;
  }
  result.lp_objective = lp.objective;
  result.chosen = randomized_round(rewards, budgets, lp.x, trials, rng);
  for (std::size_t j = 0; j < pool.size(); ++j)
    if (result.chosen[j]) result.chosen_reward += rewards[j];
  return result;
}

std::vector<char> brute_force_select(const std::vector<double>& rewards,
                                     const LinearBudgets& budgets) {
  const std::size_t n = rewards.size();
  if (n > 25) throw std::invalid_argument("brute_force_select: instance too large");
  std::vector<char> best(n, 0);
  double best_reward = -kInf;
  std::vector<char> pick(n);
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double reward = 0.0;
    bool ok = true;
    for (std::size_t j = 0; j < n; ++j) {
      pick[j] = (mask >> j) & 1;
      if (pick[j]) {
        if (budgets.excluded[j]) {
          ok = false;
          break;
        }
        reward += rewards[j];
      }
    }
    if (!ok || !all_rows_satisfied(budgets, pick)) continue;
    if (reward > best_reward) {
      best_reward = reward;
      best = pick;
    }
  }
  return best;
}

}  // namespace codedchain

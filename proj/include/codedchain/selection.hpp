#pragma once

#include <cstdint>
#include <vector>

#include "codedchain/rng.hpp"
#include "codedchain/transaction.hpp"

namespace codedchain {

enum class SelectionMode { kStochastic, kDeterministic };

struct SelectionProblem {
  SelectionMode mode = SelectionMode::kStochastic;
  double compute_budget = 6.7e6;   // C
  double size_budget = 1.2e6;      // S, one block
  std::uint64_t depth_limit = 0;   // D
  double q1 = 0.9;                 // compute-budget confidence floor
  double q2 = 0.9;                 // size-budget confidence floor
  double q3 = 0.9;                 // depth confidence floor
  double compute_scale = 42000.0;  // gamma scale of the compute-cost model
  double size_omega = 1e6 / 3000.0;  // per-byte variance of the size model
};

// One linear row: sum_j coef[j] * x_j <= limit.
struct BudgetRow {
  std::vector<double> coef;
  double limit = 0.0;
};

struct LinearBudgets {
  std::vector<BudgetRow> rows;       // at most 3
  std::vector<char> excluded;        // forced x_j = 0 (depth-infeasible items)
  bool empty_feasible = false;       // no positive budget exists
};

// Collapses the probabilistic constraints to linear ones over the model
// parameters: gamma additivity turns the compute floor into a shape-sum cap
// A* with P(A*, C/scale) = q1; the normal size model gives a mean-sum cap
// T* solving S - T = z sqrt(omega T); independence of the Poisson depths
// turns the joint floor into sum_j -ln Q(D+1, lambda_j) x_j <= -ln q3.
// Deterministic mode instead uses realized costs with limits C and S and
// excludes transactions whose current depth exceeds D.
LinearBudgets reduce_to_linear(const SelectionProblem& problem,
                               const std::vector<Transaction>& pool,
                               std::uint64_t epoch);

struct LpSolution {
  std::vector<double> x;   // in [0, 1]; 0 for excluded items
  double objective = 0.0;
  bool feasible = true;
};

// Maximizes rewards . x over the box [0,1]^n intersected with the budget
// rows (bounded-variable simplex, Bland's rule). Excluded items stay 0.
LpSolution lp_relax_select(const std::vector<double>& rewards,
                           const LinearBudgets& budgets);

// Repeated Bernoulli(x_j) roundings repaired to feasibility by discarding
// the worst reward-per-load item; returns the best feasible indicator found.
std::vector<char> randomized_round(const std::vector<double>& rewards,
                                   const LinearBudgets& budgets,
                                   const std::vector<double>& x,
                                   std::uint32_t trials, Rng& rng);

struct SelectionResult {
  std::vector<char> chosen;          // indicator over the batch
  double lp_objective = 0.0;
  double chosen_reward = 0.0;
  bool empty_feasible = false;
};

// Full pipeline: reduce, relax, round.
SelectionResult select_transactions(const SelectionProblem& problem,
                                    const std::vector<Transaction>& pool,
                                    const std::vector<double>& rewards,
                                    std::uint64_t epoch, std::uint32_t trials,
                                    Rng& rng);

// Exact integer optimum by subset enumeration; for tests and small batches.
std::vector<char> brute_force_select(const std::vector<double>& rewards,
                                     const LinearBudgets& budgets);

}  // namespace codedchain

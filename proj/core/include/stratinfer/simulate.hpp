#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "stratinfer/dirmath.hpp"
#include "stratinfer/trajectory.hpp"

namespace stratinfer {

/// Throws Error(InvalidSpec) when the spec violates its invariants.
void validate(const SimSpec& spec);

/// Generates one seeded coordination event.
///
/// Agent index 0 is informed: it draws a uniform heading and holds it. The other
/// agents start with uniform headings and update per regime:
///   HM          star network onto agent 0, each link realized with probability rho;
///   LRA         equal mean over Delaunay neighbors of the current positions;
///   HM_AND_LRA  ids 2..n/2 use HM with rho = 1, the rest LRA;
///   MIXED       each step each agent picks HM (rho = 1) with probability mix_prob, else LRA;
///   RANDOM      every agent, including agent 0, draws a fresh uniform heading every step.
/// Positions advance by speed along the chosen heading, and the stored heading is
/// the one re-derived from the displacement, so directions always equal
/// directions_from_positions(positions).
TrajectorySet simulate(const SimSpec& spec);

/// Seed of event k derived from a master seed (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k) noexcept;

struct ConvergenceReport {
  double epsilon = 0.0;
  std::optional<std::size_t> converged_at;
  std::optional<double> bound;
};

/// Expected-time upper bound n * max_i(log2(dist(S0_i, S0_w) / eps) / p*), negative logs clamped.
/// Throws Error(InvalidParam) unless p_star > 0 and epsilon > 0.
double compute_hm_bound(std::span<const DirectionDeg> initial_dirs, DirectionDeg target,
                        double epsilon, double p_star, std::size_t n);

/// First step from which every agent stays within epsilon of the informed agent's heading.
/// Attaches compute_hm_bound when the set was simulated under HM with rho > 0.
/// Throws Error(NoInformedAgent).
ConvergenceReport check_convergence(const TrajectorySet& ts, double epsilon);

}  // namespace stratinfer

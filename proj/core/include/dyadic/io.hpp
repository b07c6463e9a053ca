#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "dyadic/checks.hpp"
#include "dyadic/estimates.hpp"
#include "dyadic/integrator.hpp"
#include "dyadic/selfsimilar.hpp"
#include "dyadic/stationary.hpp"

namespace dyadic {

/// Round-trippable decimal rendering: 17 significant digits, '.' decimal
/// point regardless of locale.
std::string format_double(double v);

/// FNV-1a 64-bit content digest, rendered as 16 hex digits.
std::uint64_t fnv1a64(std::string_view data);
std::string digest_hex(std::string_view data);

void write_text_file(const std::filesystem::path& path, std::string_view content);
std::string read_text_file(const std::filesystem::path& path);

/// t,u_1,...,u_N on the dense sample grid.
std::string trajectory_csv(const Trajectory& traj);
nlohmann::json trajectory_json(const Trajectory& traj);

/// t,energy,cumulative_dissipation,identity_residual,leray_hopf_slack.
std::string energy_csv(const EnergyReport& rep);

/// k,b_k,a_k,envelope_k (envelope 0 where no closed-form bound applies).
std::string stationary_csv(const StationarySolution& sol);
/// Includes the shooting parameter, bracket, residual summary, and for the
/// supercritical regime the e_n = -a_n lambda^(beta n / 3) normalization.
nlohmann::json stationary_json(const StationarySolution& sol, const ModelParams& params,
                               const ShootResult* shot);

/// t,n,analytic,simulated,abs_diff (simulated fields empty past the time cap).
std::string selfsimilar_csv(const SelfSimilarSolution& sol, const BlowupReport& rep);

/// t,psi.
std::string psi_csv(const PsiMetric& psi);

/// mode,level,measure_a,measure_b,bound_a,bound_b,ok.
std::string level_set_csv(const std::vector<LevelSetStats>& stats);

/// mode,integral,tail_bound,paper_bound,ok.
std::string cube_integral_csv(const std::vector<CubeIntegralReport>& reps);

}  // namespace dyadic

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "nmrdiscord/states.hpp"

namespace nmrdiscord::cli {

struct WernerCurvesArgs {
  double eps_min = 0.0;
  double eps_max = 1.0;
  int steps = 101;
};

struct PrepScanArgs {
  int theta_steps = 13;
  double xi = kDefaultXi;
  double j_hz = 219.0;
};

// Defaults give a visible fidelity gap between DD and no DD within about half a second:
// a 0.3 Hz residual offset on the carbon plus weak OU noise.
struct DdArgs {
  std::string scheme = "cpmg";
  double total_ms = 560.0;
  double spacing_ms = 4.0;
  double sample_ms = 28.0;
  double ou_sigma = 1.6;  // rad/s
  double tau_c_ms = 10.0;
  bool t1_channel = true;
  int ensemble = 512;
  std::uint64_t seed = 1;
  double xi = kDefaultXi;
  double j_hz = 219.0;
  double offset_a_hz = 0.0;
  double offset_b_hz = 0.3;
};

struct SpinlockArgs {
  double xi = kDefaultXi;
  double lambda1_inv_ms = 0.75;
  double lambda2_inv_s = 26.0;
  // Amplitude of an injected coherence artifact (units of xi) that the Bell-diagonal
  // projection discards.
  double artifact = 0.0;
  int n_cos_theta = 101;
  int n_phi = 100;
};

struct DiscordArgs {
  std::string input;
  std::string method = "grid";
  int n_cos_theta = 101;
  int n_phi = 100;
  bool refine = false;
  double tol = 1e-6;
};

struct FitArgs {
  std::string input;
  std::string kind = "attenuated";
  std::string companion;  // optional plain-fidelity CSV
  double xi = kDefaultXi;
  double noise_floor = 1e-3;
};

// "%.12g", with negative zero printed as 0.
std::string fmt(double v);

std::string werner_curves(const WernerCurvesArgs& a);
std::string prep_scan(const PrepScanArgs& a);
std::string dd(const DdArgs& a);
std::string spinlock(const SpinlockArgs& a);
std::string discord(const DiscordArgs& a);
std::string fit(const FitArgs& a);

/// Parses argv, runs one command and writes its output to `out` (or --out).
/// Returns 0, 2 on invalid input, 3 on numeric failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nmrdiscord::cli

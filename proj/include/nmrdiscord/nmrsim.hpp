#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "nmrdiscord/matcore.hpp"
#include "nmrdiscord/states.hpp"

namespace nmrdiscord {

enum class Target { A, B, Both };
enum class CouplingMode { ZZ, Isotropic };

/// Rotating-frame description of a heteronuclear or homonuclear spin pair.
struct SpinSystem {
  double j_hz = 219.0;
  double offset_a_hz = 0.0;
  double offset_b_hz = 0.0;
  double t1_a = 14.5;
  double t2_a = 5.7;
  double t1_b = 21.0;
  double t2_b = 0.25;
  double gamma_ratio = 0.25;

  // Throws PreconditionError unless all time constants are positive and T2 <= 2 T1.
  void validate() const;

  // 13C-chloroform: 1H (A) and 13C (B), on resonance, J = 219 Hz.
  static SpinSystem chloroform();
  // Proton pair of 5-chlorothiophene-2-carbonitrile: shift difference 270 Hz, J = 4.11 Hz.
  static SpinSystem chlorothiophene();
};

struct Pulse {
  Target target = Target::Both;
  double angle = 0.0;  // rad
  double phase = 0.0;  // rad, 0 = x, pi/2 = y
};
struct Delay {
  double duration = 0.0;  // s
  CouplingMode mode = CouplingMode::ZZ;
};
struct Gradient {};
struct SpinLock {
  double duration = 0.0;  // s
};
using SequenceEvent = std::variant<Pulse, Delay, Gradient, SpinLock>;

/// exp(-i angle (cos(phase) Ix + sin(phase) Iy)) on the targeted spin(s).
ComplexMatrix rotation_unitary(Target target, double angle, double phase);

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u);

/// Free-precession Hamiltonian in rad/s: offsets plus 2 pi J Iz Iz (ZZ) or 2 pi J I.I.
ComplexMatrix free_hamiltonian(const SpinSystem& sys, CouplingMode mode);

DensityMatrix evolve_delay(const DensityMatrix& rho, double t, const SpinSystem& sys,
                           CouplingMode mode);

/// Zeroes every off-diagonal element in the computational basis.
DensityMatrix gradient_crush(const DensityMatrix& rho);

/// Spin-lock of duration tau: evolution under 2 pi J I.I followed by the two-rate
/// singlet/triplet channel (triplet populations equilibrate and all singlet/triplet
/// coherences decay at lambda1; the whole deviation decays at lambda2). Reproduces
/// relaxation_model_state() for the singlet-triplet initial state.
DensityMatrix simulate_spinlock(const DensityMatrix& rho0, double tau, const RelaxModelParams& p,
                                const SpinSystem& sys = SpinSystem::chlorothiophene());

/// Runs events in order. SpinLock events need `spinlock` relaxation parameters; without
/// them the lock is treated as ideal isotropic evolution.
DensityMatrix apply_sequence(const DensityMatrix& rho, std::span<const SequenceEvent> events,
                             const SpinSystem& sys,
                             const std::optional<RelaxModelParams>& spinlock = std::nullopt);

// 15x(A) - 1/(2J) - 75-y(A) - gradient
std::vector<SequenceEvent> pseudopure_sequence(const SpinSystem& sys);
// 90x(A) 90-x(B) - theta/(pi J) - 180y(A) 90y(B)
std::vector<SequenceEvent> werner_sequence(double theta, const SpinSystem& sys);

/// Spatial-averaging |00> pseudopure preparation starting from thermal equilibrium.
DensityMatrix prepare_pseudopure(double xi, const SpinSystem& sys = SpinSystem::chloroform());

/// Entangling sequence with coupling angle theta in [0, 2 pi]; theta = pi/2 gives
/// werner(xi / 8) from the pseudopure state.
DensityMatrix prepare_werner(const DensityMatrix& rho_pp, double theta,
                             const SpinSystem& sys = SpinSystem::chloroform());

struct PulseSchedule {
  std::vector<double> times;  // s, ascending
  double total = 0.0;         // s
};

/// n pi pulses centred in consecutive windows of `spacing`: (k - 1/2) * spacing.
PulseSchedule cpmg_schedule(int n_pulses, double spacing = 4e-3);

inline constexpr double kUddCycle = 28e-3;
inline constexpr int kUddPulsesPerCycle = 7;

/// Seven pulses per 28 ms cycle at 28 sin^2(pi j / 16) ms, cycles concatenated.
PulseSchedule udd_schedule(int n_cycles);

enum class DdScheme { None, Cpmg, Udd };

/// Per-spin Ornstein-Uhlenbeck frequency noise plus an optional T1 channel.
struct NoiseModel {
  double ou_sigma = 0.0;     // rad/s, stationary standard deviation
  double ou_tau_c = 10e-3;   // s, correlation time (may be +inf for static noise)
  bool t1_channel = false;
  int ensemble_size = 512;
  std::uint64_t seed = 1;

  void validate() const;
};

struct DdRequest {
  DdScheme scheme = DdScheme::None;
  double total_time = 0.56;    // s
  double cpmg_spacing = 4e-3;  // s; also sets the integration step
  // Nondecreasing, within [0, total_time].
  std::vector<double> sample_times;
  // Polarization of the equilibrium state the T1 channel relaxes towards.
  double thermal_xi = kDefaultXi;
  // Replaces the scheme's schedule when set.
  std::optional<std::vector<double>> pulse_times;
};

/// Pulse schedule used by simulate_dd for a scheme: whole CPMG windows or whole UDD
/// cycles that fit in total_time; empty for DdScheme::None.
PulseSchedule dd_schedule(DdScheme scheme, double total_time, double cpmg_spacing = 4e-3);

/// Ensemble-averaged trajectory under ZZ coupling, offsets, OU dephasing and ideal
/// instantaneous pi_x pulses on both spins. The T1 channel, if enabled, is applied to
/// the averaged state at each sample time. A sample coinciding with a pulse is taken
/// before the pulse. Throws ScheduleOverrun if a pulse falls after total_time.
std::vector<DensityMatrix> simulate_dd(const DensityMatrix& rho0, const DdRequest& req,
                                       const SpinSystem& sys, const NoiseModel& noise);

}  // namespace nmrdiscord

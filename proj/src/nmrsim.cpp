#include "nmrdiscord/nmrsim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "nmrdiscord/correlations.hpp"
#include "nmrdiscord/errors.hpp"

namespace nmrdiscord {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_nonnegative(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << who << ": duration must be finite and >= 0, got " << t;
    throw PreconditionError(os.str());
  }
}

Eigen::Matrix2cd qubit_rotation(double angle, double phase) {
  const Complex c(std::cos(angle / 2.0), 0.0);
  const Complex s = Complex(0.0, -std::sin(angle / 2.0));
  return c * pauli(0) + s * (std::cos(phase) * pauli(1) + std::sin(phase) * pauli(2));
}

ComplexMatrix coupling_operator(CouplingMode mode) {
  ComplexMatrix k = spin_op(Subsystem::A, 3) * spin_op(Subsystem::B, 3);
  if (mode == CouplingMode::Isotropic) {
    k += spin_op(Subsystem::A, 1) * spin_op(Subsystem::B, 1) +
         spin_op(Subsystem::A, 2) * spin_op(Subsystem::B, 2);
  }
  return k;
}

// exp(-i h t) for Hermitian h
ComplexMatrix propagator(const ComplexMatrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  const Eigen::VectorXd& e = solver.eigenvalues();
  Eigen::VectorXcd phases(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::polar(1.0, -e(k) * t);
  return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

// Columns S0, T+1, T0, T-1.
ComplexMatrix singlet_triplet_basis() {
  ComplexMatrix w = ComplexMatrix::Zero(4, 4);
  w.col(0) = bell_ket(BellKind::PsiMinus);
  w(0, 1) = 1.0;
  w.col(2) = bell_ket(BellKind::PsiPlus);
  w(3, 3) = 1.0;
  return w;
}

// Generalized amplitude damping of one spin in Pauli-transfer form (index 0 = identity).
Eigen::Matrix4d t1_transfer(double t, double t1, double z_eq) {
  const double b = std::exp(-t / t1);
  const double a = std::exp(-t / (2.0 * t1));
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m(0, 0) = 1.0;
  m(1, 1) = a;
  m(2, 2) = a;
  m(3, 3) = b;
  m(3, 0) = (1.0 - b) * z_eq;
  return m;
}

ComplexMatrix apply_t1_channel(const ComplexMatrix& rho, double t, const SpinSystem& sys,
                               double xi) {
  const BlochForm f = bloch_decompose(validate_density(rho));
  Eigen::Matrix4d r;
  r(0, 0) = 1.0;
  r.block<1, 3>(0, 1) = f.y.transpose();
  r.block<3, 1>(1, 0) = f.x;
  r.block<3, 3>(1, 1) = f.T;
  const Eigen::Matrix4d la = t1_transfer(t, sys.t1_a, xi / 2.0);
  const Eigen::Matrix4d lb = t1_transfer(t, sys.t1_b, xi * sys.gamma_ratio / 2.0);
  const Eigen::Matrix4d out = la * r * lb.transpose();
  BlochForm g;
  g.x = out.block<3, 1>(1, 0);
  g.y = out.block<1, 3>(0, 1).transpose();
  g.T = out.block<3, 3>(1, 1);
  return bloch_compose(g);
}

}  // namespace

void SpinSystem::validate() const {
  const double times[4] = {t1_a, t2_a, t1_b, t2_b};
  for (double t : times) {
    if (!(t > 0.0)) {
      std::ostringstream os;
      os << "SpinSystem: relaxation times must be positive, got " << t;
      throw PreconditionError(os.str());
    }
  }
  if (t2_a > 2.0 * t1_a || t2_b > 2.0 * t1_b) {
    throw PreconditionError("SpinSystem: T2 must not exceed 2 T1");
  }
  if (!std::isfinite(j_hz) || !std::isfinite(offset_a_hz) || !std::isfinite(offset_b_hz) ||
      !std::isfinite(gamma_ratio)) {
    throw PreconditionError("SpinSystem: J, offsets and gamma ratio must be finite");
  }
}

SpinSystem SpinSystem::chloroform() { return SpinSystem{}; }

SpinSystem SpinSystem::chlorothiophene() {
  SpinSystem s;
  s.j_hz = 4.11;
  s.offset_a_hz = 135.0;
  s.offset_b_hz = -135.0;
  s.t1_a = s.t1_b = 6.3;
  s.t2_a = s.t2_b = 2.3;
  s.gamma_ratio = 1.0;
  return s;
}

ComplexMatrix rotation_unitary(Target target, double angle, double phase) {
  const Eigen::Matrix2cd r = qubit_rotation(angle, phase);
  const Eigen::Matrix2cd one = pauli(0);
  switch (target) {
    case Target::A:
      return tensor(r, one);
    case Target::B:
      return tensor(one, r);
    case Target::Both:
      break;
  }
  return tensor(r, r);
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const ComplexMatrix& u) {
  return validate_density(u * rho.mat() * u.adjoint());
}

ComplexMatrix free_hamiltonian(const SpinSystem& sys, CouplingMode mode) {
  return kTwoPi * (sys.offset_a_hz * spin_op(Subsystem::A, 3) +
                   sys.offset_b_hz * spin_op(Subsystem::B, 3) + sys.j_hz * coupling_operator(mode));
}

DensityMatrix evolve_delay(const DensityMatrix& rho, double t, const SpinSystem& sys,
                           CouplingMode mode) {
  require_nonnegative(t, "evolve_delay");
  if (t == 0.0) return rho;
  return apply_unitary(rho, propagator(free_hamiltonian(sys, mode), t));
}

DensityMatrix gradient_crush(const DensityMatrix& rho) {
  const ComplexMatrix d = rho.mat().diagonal().asDiagonal();
  return validate_density(d);
}

DensityMatrix simulate_spinlock(const DensityMatrix& rho0, double tau, const RelaxModelParams& p,
                                const SpinSystem& sys) {
  require_nonnegative(tau, "simulate_spinlock");
  if (!(p.lambda1 > 0.0) || !(p.lambda2 > 0.0)) {
    throw PreconditionError("simulate_spinlock: relaxation rates must be positive");
  }
  if (rho0.dim() != 4) throw DimMismatch("simulate_spinlock: expected a two-qubit state");

  SpinSystem locked = sys;
  locked.offset_a_hz = locked.offset_b_hz = 0.0;
  const DensityMatrix coherent = evolve_delay(rho0, tau, locked, CouplingMode::Isotropic);

  const ComplexMatrix w = singlet_triplet_basis();
  const double tr = coherent.trace();
  ComplexMatrix d = w.adjoint() * DeviationMatrix(coherent).mat() * w;
  const double a = std::exp(-p.lambda1 * tau);
  const Complex mean = (d(1, 1) + d(2, 2) + d(3, 3)) / 3.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i == j) {
        if (i > 0) d(i, i) = mean + (d(i, i) - mean) * a;
      } else {
        d(i, j) *= a;
      }
    }
  }
  d *= std::exp(-p.lambda2 * tau);
  return validate_density(tr / 4.0 * identity(4) + w * d * w.adjoint());
}

DensityMatrix apply_sequence(const DensityMatrix& rho, std::span<const SequenceEvent> events,
                             const SpinSystem& sys,
                             const std::optional<RelaxModelParams>& spinlock) {
  DensityMatrix cur = rho;
  for (const SequenceEvent& ev : events) {
    if (const auto* pulse = std::get_if<Pulse>(&ev)) {
      if (!std::isfinite(pulse->angle) || !std::isfinite(pulse->phase)) {
        throw PreconditionError("apply_sequence: pulse angle and phase must be finite");
      }
      cur = apply_unitary(cur, rotation_unitary(pulse->target, pulse->angle, pulse->phase));
    } else if (const auto* delay = std::get_if<Delay>(&ev)) {
      cur = evolve_delay(cur, delay->duration, sys, delay->mode);
    } else if (std::holds_alternative<Gradient>(ev)) {
      cur = gradient_crush(cur);
    } else {
      const double tau = std::get<SpinLock>(ev).duration;
      if (spinlock) {
        cur = simulate_spinlock(cur, tau, *spinlock, sys);
      } else {
        SpinSystem locked = sys;
        locked.offset_a_hz = locked.offset_b_hz = 0.0;
        cur = evolve_delay(cur, tau, locked, CouplingMode::Isotropic);
      }
    }
  }
  return cur;
}

std::vector<SequenceEvent> pseudopure_sequence(const SpinSystem& sys) {
  const double deg = std::numbers::pi / 180.0;
  return {Pulse{Target::A, 15.0 * deg, 0.0},
          Delay{1.0 / (2.0 * sys.j_hz), CouplingMode::ZZ},
          Pulse{Target::A, 75.0 * deg, 1.5 * std::numbers::pi},
          Gradient{}};
}

std::vector<SequenceEvent> werner_sequence(double theta, const SpinSystem& sys) {
  const double half_pi = std::numbers::pi / 2.0;
  return {Pulse{Target::A, half_pi, 0.0},
          Pulse{Target::B, half_pi, std::numbers::pi},
          Delay{theta / (std::numbers::pi * sys.j_hz), CouplingMode::ZZ},
          Pulse{Target::A, std::numbers::pi, half_pi},
          Pulse{Target::B, half_pi, half_pi}};
}

DensityMatrix prepare_pseudopure(double xi, const SpinSystem& sys) {
  sys.validate();
  const auto seq = pseudopure_sequence(sys);
  return apply_sequence(thermal_equilibrium(xi, sys.gamma_ratio), seq, sys);
}

DensityMatrix prepare_werner(const DensityMatrix& rho_pp, double theta, const SpinSystem& sys) {
  if (!(theta >= 0.0 && theta <= 2.0 * std::numbers::pi)) {
    std::ostringstream os;
    os << "prepare_werner: theta must lie in [0, 2 pi], got " << theta;
    throw PreconditionError(os.str());
  }
  sys.validate();
  const auto seq = werner_sequence(theta, sys);
  return apply_sequence(rho_pp, seq, sys);
}

PulseSchedule cpmg_schedule(int n_pulses, double spacing) {
  if (n_pulses < 1 || !(spacing > 0.0)) {
    throw PreconditionError("cpmg_schedule: need n_pulses >= 1 and positive spacing");
  }
  PulseSchedule s;
  s.times.reserve(n_pulses);
  for (int k = 1; k <= n_pulses; ++k) s.times.push_back((k - 0.5) * spacing);
  s.total = n_pulses * spacing;
  return s;
}

PulseSchedule udd_schedule(int n_cycles) {
  if (n_cycles < 1) throw PreconditionError("udd_schedule: need n_cycles >= 1");
  const int n = kUddPulsesPerCycle;
  std::vector<double> cycle(n);
  for (int j = 1; j <= n; ++j) {
    const double s = std::sin(std::numbers::pi * j / (2.0 * n + 2.0));
    cycle[j - 1] = kUddCycle * s * s;
  }
  cycle[(n + 1) / 2 - 1] = kUddCycle / 2.0;  // sin^2(pi/4) rounds off the exact midpoint
  PulseSchedule s;
  for (int c = 0; c < n_cycles; ++c) {
    for (double t : cycle) s.times.push_back(c * kUddCycle + t);
  }
  s.total = n_cycles * kUddCycle;
  return s;
}

void NoiseModel::validate() const {
  if (ensemble_size < 1) throw PreconditionError("NoiseModel: ensemble_size must be >= 1");
  if (!(ou_tau_c > 0.0)) throw PreconditionError("NoiseModel: ou_tau_c must be positive");
  if (!(ou_sigma >= 0.0) || !std::isfinite(ou_sigma)) {
    throw PreconditionError("NoiseModel: ou_sigma must be finite and >= 0");
  }
}

PulseSchedule dd_schedule(DdScheme scheme, double total_time, double cpmg_spacing) {
  const double slack = 1e-9;
  switch (scheme) {
    case DdScheme::None:
      return PulseSchedule{{}, total_time};
    case DdScheme::Cpmg: {
      const int n = static_cast<int>(std::floor(total_time / cpmg_spacing + slack));
      if (n < 1) return PulseSchedule{{}, total_time};
      PulseSchedule s = cpmg_schedule(n, cpmg_spacing);
      s.total = total_time;
      return s;
    }
    case DdScheme::Udd: {
      const int n = static_cast<int>(std::floor(total_time / kUddCycle + slack));
      if (n < 1) return PulseSchedule{{}, total_time};
      PulseSchedule s = udd_schedule(n);
      s.total = total_time;
      return s;
    }
  }
  return PulseSchedule{{}, total_time};
}

std::vector<DensityMatrix> simulate_dd(const DensityMatrix& rho0, const DdRequest& req,
                                       const SpinSystem& sys, const NoiseModel& noise) {
  if (rho0.dim() != 4) throw DimMismatch("simulate_dd: expected a two-qubit state");
  sys.validate();
  noise.validate();
  if (!(req.total_time >= 0.0) || !std::isfinite(req.total_time) || !(req.cpmg_spacing > 0.0)) {
    throw PreconditionError("simulate_dd: need finite total_time >= 0 and positive spacing");
  }
  const std::vector<double>& samples = req.sample_times;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i] >= 0.0 && samples[i] <= req.total_time)) {
      std::ostringstream os;
      os << "simulate_dd: sample time " << samples[i] << " s lies outside [0, "
         << req.total_time << "]";
      throw PreconditionError(os.str());
    }
    if (i > 0 && samples[i] < samples[i - 1]) {
      throw PreconditionError("simulate_dd: sample times must be nondecreasing");
    }
  }
  std::vector<double> pulses =
      req.pulse_times ? *req.pulse_times
                      : dd_schedule(req.scheme, req.total_time, req.cpmg_spacing).times;
  std::sort(pulses.begin(), pulses.end());
  for (double t : pulses) {
    if (!(t >= 0.0) || t > req.total_time) {
      std::ostringstream os;
      os << "ScheduleOverrun: pulse at " << t << " s falls outside the " << req.total_time
         << " s evolution";
      throw ScheduleOverrun(os.str());
    }
  }

  // Breakpoints: samples are handled before a pulse at the same instant.
  struct Event {
    double t;
    int kind;  // 0 sample, 1 pulse
    std::size_t index;
  };
  std::vector<Event> timeline;
  for (std::size_t i = 0; i < samples.size(); ++i) timeline.push_back({samples[i], 0, i});
  for (std::size_t i = 0; i < pulses.size(); ++i) timeline.push_back({pulses[i], 1, i});
  std::stable_sort(timeline.begin(), timeline.end(), [](const Event& a, const Event& b) {
    return a.t < b.t || (a.t == b.t && a.kind < b.kind);
  });

  const double dt_max = std::min(noise.ou_tau_c / 10.0, req.cpmg_spacing / 20.0);
  const bool noisy = noise.ou_sigma > 0.0;
  const int members = noisy ? noise.ensemble_size : 1;
  const Eigen::Matrix4cd pi_pulse = rotation_unitary(Target::Both, std::numbers::pi, 0.0);
  const double wa0 = kTwoPi * sys.offset_a_hz;
  const double wb0 = kTwoPi * sys.offset_b_hz;
  const double wj = kTwoPi * sys.j_hz;
  const double decay_per_unit = std::isinf(noise.ou_tau_c) ? 0.0 : 1.0 / noise.ou_tau_c;

  std::vector<Eigen::Matrix4cd> sums(samples.size(), Eigen::Matrix4cd::Zero());
  for (int m = 0; m < members; ++m) {
    std::seed_seq seq{static_cast<std::uint32_t>(noise.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(noise.seed >> 32), static_cast<std::uint32_t>(m)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double xa = noisy ? noise.ou_sigma * gauss(rng) : 0.0;
    double xb = noisy ? noise.ou_sigma * gauss(rng) : 0.0;

    Eigen::Matrix4cd rho = rho0.mat();
    double now = 0.0;
    for (const Event& ev : timeline) {
      const double seg = ev.t - now;
      if (seg > 0.0) {
        const int steps = std::max(1, static_cast<int>(std::ceil(seg / dt_max - 1e-9)));
        const double h = seg / steps;
        const double keep = std::exp(-h * decay_per_unit);
        const double kick = noise.ou_sigma * std::sqrt(std::max(0.0, 1.0 - keep * keep));
        for (int s = 0; s < steps; ++s) {
          const double wa = wa0 + xa;
          const double wb = wb0 + xb;
          Eigen::Vector4cd ph;
          for (int k = 0; k < 4; ++k) {
            const double ma = (k & 2) ? -0.5 : 0.5;
            const double mb = (k & 1) ? -0.5 : 0.5;
            ph(k) = std::polar(1.0, -(wa * ma + wb * mb + wj * ma * mb) * h);
          }
          rho = (ph * ph.adjoint()).cwiseProduct(rho);
          if (noisy) {
            xa = keep * xa + kick * gauss(rng);
            xb = keep * xb + kick * gauss(rng);
          }
        }
        now = ev.t;
      }
      if (ev.kind == 0) {
        sums[ev.index] += rho;
      } else {
        rho = pi_pulse * rho * pi_pulse.adjoint();
      }
    }
  }

  std::vector<DensityMatrix> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ComplexMatrix avg = sums[i] / static_cast<double>(members);
    if (noise.t1_channel) avg = apply_t1_channel(avg, samples[i], sys, req.thermal_xi);
    out.push_back(validate_density(avg));
  }
  return out;
}

}  // namespace nmrdiscord

#include "localflow/flow.hpp"

#include "localflow/random.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace localflow {

namespace {

// A trial step is accepted unless it lowers the fidelity by more than this
// (roundoff near critical points).
constexpr double kAcceptSlack = 1e-13;
constexpr double kStepGrowth = 1.1;
constexpr int kKickAttempts = 32;

TangentDirection flow_gradient(const DensityMatrix& rho0, const UnitaryOp& u,
                               const DensityMatrix& rhoT, bool full_group) {
  return full_group ? gradient_full(rho0, u, rhoT) : gradient_local(rho0, u, rhoT);
}

UnitaryOp retract(const UnitaryOp& u, const TangentDirection& g, double step) {
  return u * expm_antihermitian(step * g);
}

// Random combination of the positive-curvature eigenvectors of the local
// Hessian, scaled to Frobenius norm `amplitude`. Zero when there are none.
TangentDirection ascent_kick(const DensityMatrix& rho0, const UnitaryOp& u, const DensityMatrix& rhoT,
                             double amplitude, Rng& rng) {
  const int n = u.qubits();
  const HermitianEigen eig = hermitian_eig(local_hessian(rho0, u, rhoT).cast<Complex>());
  const auto basis = local_tangent_basis(n);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(static_cast<Index>(basis.size()));
  for (Index k = 0; k < eig.values.size(); ++k) {
    if (eig.values(k) <= kSignatureTol) continue;
    // eigenvectors of a real symmetric matrix are real up to a phase
    Index top = 0;
    eig.vectors.col(k).cwiseAbs().maxCoeff(&top);
    const Complex phase = std::conj(eig.vectors(top, k)) / std::abs(eig.vectors(top, k));
    w += gauss(rng) * (phase * eig.vectors.col(k)).real();
  }
  TangentDirection a = TangentDirection::zero(n);
  for (std::size_t j = 0; j < basis.size(); ++j) a = a + w(static_cast<Index>(j)) * basis[j];
  return a.norm() > 0.0 ? (amplitude / a.norm()) * a : a;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(step > 0.0)) throw std::invalid_argument("FlowConfig: step must be positive");
  if (max_steps <= 0) throw std::invalid_argument("FlowConfig: max_steps must be positive");
  if (!(grad_tol > 0.0)) throw std::invalid_argument("FlowConfig: grad_tol must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw std::invalid_argument("FlowConfig: backtrack_factor must lie in (0, 1)");
  }
  if (!(kick_amplitude > 0.0)) throw std::invalid_argument("FlowConfig: kick_amplitude must be positive");
}

std::string_view to_string(FlowOutcome o) {
  switch (o) {
    case FlowOutcome::converged_max: return "converged_max";
    case FlowOutcome::converged_saddle: return "converged_saddle";
    case FlowOutcome::stalled: return "stalled";
    case FlowOutcome::max_steps: return "max_steps";
  }
  return "max_steps";
}

std::string_view to_string(EndpointKind k) {
  switch (k) {
    case EndpointKind::strict_maximum: return "strict_maximum";
    case EndpointKind::degenerate_maximum: return "degenerate_maximum";
    case EndpointKind::saddle: return "saddle";
    case EndpointKind::minimum: return "minimum";
    case EndpointKind::degenerate: return "degenerate";
  }
  return "degenerate";
}

FlowStepResult flow_step(const UnitaryOp& u, const DensityMatrix& rho0, const DensityMatrix& rhoT,
                         double step) {
  if (!(step > 0.0)) throw std::invalid_argument("flow_step: step must be positive");
  const TangentDirection g = gradient_local(rho0, u, rhoT);
  UnitaryOp next = retract(u, g, step);
  const double f = fidelity(rho0, next, rhoT);
  return {std::move(next), f};
}

EndpointClass classify_endpoint(const DensityMatrix& rho0, const UnitaryOp& u,
                                const DensityMatrix& rhoT) {
  EndpointClass c;
  c.spectrum = hessian_matrix_local(rho0, u, rhoT);
  const Matrix moved = u.matrix().adjoint() * rho0.matrix() * u.matrix();
  c.stabilizer_dim = local_stabilizer_dimension(DensityMatrix(trusted, 0.5 * (moved + moved.adjoint())));
  for (Index i = 0; i < c.spectrum.eigenvalues.size(); ++i) {
    if (std::abs(c.spectrum.eigenvalues(i)) < kNullityTol) ++c.hessian_nullity;
  }
  switch (c.spectrum.signature) {
    case Signature::maximum:
      c.kind = c.hessian_nullity > c.stabilizer_dim ? EndpointKind::degenerate_maximum
                                                    : EndpointKind::strict_maximum;
      break;
    case Signature::saddle: c.kind = EndpointKind::saddle; break;
    case Signature::minimum: c.kind = EndpointKind::minimum; break;
    case Signature::degenerate: c.kind = EndpointKind::degenerate; break;
  }
  return c;
}

FlowTrace run_flow(const DensityMatrix& rho0, const DensityMatrix& rhoT, const UnitaryOp& u0,
                   const FlowConfig& cfg) {
  cfg.validate();
  if (rho0.dim() != rhoT.dim() || u0.dim() != rho0.dim()) {
    throw std::invalid_argument("run_flow: dimension mismatch");
  }
  const int n = u0.qubits();
  Rng rng(cfg.seed);

  FlowTrace trace;
  UnitaryOp u = u0;
  double f = fidelity(rho0, u, rhoT);
  TangentDirection g = flow_gradient(rho0, u, rhoT, cfg.full_group);
  double gn = g.norm();
  double h = cfg.step;
  double s = 0.0;
  trace.samples.push_back({s, f, gn});

  int small_run = 0;
  double small_run_ref = gn;

  for (;;) {
    if (gn < cfg.grad_tol) {
      const EndpointClass cls = classify_endpoint(rho0, u, rhoT);
      trace.endpoint_spectrum = cls.spectrum;
      if (cls.kind == EndpointKind::strict_maximum) {
        trace.outcome = FlowOutcome::converged_max;
        break;
      }
      bool kicked = false;
      if (cfg.saddle_kicks && trace.kicks_used < kMaxKicks) {
        // Positive-curvature directions first, then plain random directions
        // for flat (higher-order) critical points.
        for (int attempt = 0; attempt <= kKickAttempts && !kicked; ++attempt) {
          TangentDirection kick = attempt == 0 ? ascent_kick(rho0, u, rhoT, cfg.kick_amplitude, rng)
                                               : random_local_tangent(n, rng, cfg.kick_amplitude);
          if (kick.norm() == 0.0) continue;
          UnitaryOp candidate = u * expm_antihermitian(kick);
          const double fc = fidelity(rho0, candidate, rhoT);
          if (fc >= f - kAcceptSlack) {
            u = std::move(candidate);
            f = fc;
            kicked = true;
          }
        }
        // A degenerate maximum admits no kick that keeps the fidelity; it
        // still consumes the kick so the run terminates.
        ++trace.kicks_used;
      }
      if (!kicked) {
        trace.outcome = FlowOutcome::converged_saddle;
        break;
      }
      g = flow_gradient(rho0, u, rhoT, cfg.full_group);
      gn = g.norm();
      h = cfg.step;
      small_run = 0;
      small_run_ref = gn;
      trace.samples.push_back({s, f, gn});
      continue;
    }

    if (trace.steps >= cfg.max_steps) {
      trace.outcome = FlowOutcome::max_steps;
      break;
    }

    bool accepted = false;
    UnitaryOp candidate;
    double fc = f;
    while (h >= 1e-14 * cfg.step) {
      candidate = retract(u, g, h);
      fc = fidelity(rho0, candidate, rhoT);
      if (fc >= f - kAcceptSlack) {
        accepted = true;
        break;
      }
      h *= cfg.backtrack_factor;
    }
    if (!accepted) {
      trace.outcome = FlowOutcome::stalled;
      break;
    }

    const double improvement = fc - f;
    u = std::move(candidate);
    f = fc;
    s += h;
    ++trace.steps;
    g = flow_gradient(rho0, u, rhoT, cfg.full_group);
    const double prev_gn = gn;
    gn = g.norm();
    trace.samples.push_back({s, f, gn});

    // Stalled: a full window of negligible improvement during which the
    // gradient did not even halve. Linear convergence through that regime
    // shrinks the gradient much faster and is not counted.
    if (improvement < kStallImprovement) {
      if (small_run == 0) small_run_ref = prev_gn;
      if (++small_run >= kStallWindow) {
        if (gn > 0.5 * small_run_ref) {
          trace.outcome = FlowOutcome::stalled;
          break;
        }
        small_run = 0;
      }
    } else {
      small_run = 0;
    }
    h = std::min(h * kStepGrowth, cfg.step);
  }

  trace.final_unitary = std::move(u);
  return trace;
}

DensityMatrix limiting_state(const FlowTrace& trace, const DensityMatrix& rho0) {
  const Matrix& u = trace.final_unitary.matrix();
  if (u.rows() != rho0.dim()) throw std::invalid_argument("limiting_state: dimension mismatch");
  const Matrix moved = u.adjoint() * rho0.matrix() * u;
  return DensityMatrix(trusted, 0.5 * (moved + moved.adjoint()));
}

void write_trace_csv(std::ostream& os, const FlowTrace& trace) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << "s,fidelity,grad_norm\n";
  os << std::setprecision(17);
  for (const auto& smp : trace.samples) {
    os << smp.s << ',' << smp.fidelity << ',' << smp.grad_norm << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

}  // namespace localflow

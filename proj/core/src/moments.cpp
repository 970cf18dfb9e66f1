#include "covlab/moments.hpp"

#include "covlab/samplers.hpp"

namespace covlab {

MomentReport expected_frob_error(const Spectrum& lambda, DistKind kind, long n) {
  if (n < 1) throw DomainError("expected_frob_error: n must be >= 1");
  const double tr = lambda.trace();
  const double tr2 = lambda.trace_power(2);
  const double d = static_cast<double>(lambda.dim());

  MomentReport report;
  report.kind = kind;
  report.n = n;
  switch (kind) {
    case DistKind::Gaussian:
      report.trace_sq_term = tr * tr;
      report.trace2_term = tr2;
      break;
    case DistKind::TruncLaplace:
      report.trace_sq_term = tr * tr;
      report.trace2_term = (trunc_laplace_kurtosis() - 2.0) * tr2;
      break;
    case DistKind::UniformSphere:
      report.trace_sq_term = d / (d + 2.0) * tr * tr;
      report.trace2_term = (d - 2.0) / (d + 2.0) * tr2;
      break;
    default:
      throw DomainError("expected_frob_error: unknown distribution kind");
  }
  report.expected_frob_sq =
      (report.trace_sq_term + report.trace2_term) / static_cast<double>(n);
  return report;
}

MomentReport expected_frob_error(const CovModel& model, long n) {
  return expected_frob_error(model.lambda, model.dist, n);
}

}  // namespace covlab

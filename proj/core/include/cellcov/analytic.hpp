#pragma once

namespace cellcov::analytic {

/// Retention probability of the conditional-thinning model, restricted to
/// (0, 1]. p = 0 collapses the nearest-interferer distance to infinity, so the
/// distributional formulas exclude it; coverage_probability accepts p = 0
/// directly and returns 1.
class ThinningProbability {
 public:
  explicit ThinningProbability(double p);
  double value() const noexcept { return p_; }

 private:
  double p_;
};

/// Path-loss exponent and linear SIR threshold. alpha must exceed 2 or the
/// interference integral diverges.
struct ChannelParams {
  ChannelParams(double alpha, double threshold);
  double alpha;
  double threshold;
};

/// CDF of the distance ratio R = R2/R1 (nearest retained interferer over
/// serving distance): F(r) = 1 - 1 / (1 + p (r^2 - 1)) for r >= 1.
double ratio_cdf(double r, ThinningProbability p);

/// Joint density of the serving distance R1 and nearest retained interferer
/// distance R2 under conditional thinning of a PPP of intensity lambda:
/// p (2 pi lambda)^2 r1 r2 exp(-lambda pi r1^2 (1-p)) exp(-p lambda pi r2^2),
/// supported on 0 <= r1 <= r2.
double joint_pdf_r1_r2(double r1, double r2, double lambda, ThinningProbability p);

/// E[R] = 1 + arctan(t) / (p t) with t = sqrt((1-p)/p); equals 2 at p = 1.
double mean_ratio(ThinningProbability p);

/// The interference integral
///   rho(alpha, T) = T^(2/alpha) * integral_{T^(-2/alpha)}^inf du / (1 + u^(alpha/2)),
/// evaluated by tanh-sinh quadrature to ~1e-10 relative error.
double coverage_integral_rho(double alpha, double threshold);

/// Closed form of rho at alpha = 4: sqrt(T) * (pi/2 - arctan(1/sqrt(T))).
/// Kept as an independent route for cross-checking the quadrature.
double coverage_rho_closed_form_alpha4(double threshold);

/// Interference-limited coverage probability P(SIR > T) of a typical UE under
/// conditional thinning: 1 / (1 + p rho(alpha, T)). Independent of the BS
/// density. Always evaluates rho by quadrature; see the alpha = 4 closed form
/// below for the second route.
double coverage_probability(double alpha, double threshold, double p);

/// Coverage at alpha = 4 via the closed form of rho.
double coverage_probability_closed_form_alpha4(double threshold, double p);

}  // namespace cellcov::analytic

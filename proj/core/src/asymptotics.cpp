#include "fdspec/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fdspec {

namespace {

// Weights of the three (Zeta: two distinct) symbol terms per variant.
struct Weights {
    double w1, w2, w3;
};

Weights variant_weights(const CoherentFrame& frame, SymbolVariant v) {
    switch (v) {
        case SymbolVariant::UpperSymbol:
            return {frame.d1, frame.d2, frame.d3};
        case SymbolVariant::LowerSymbol:
            return {1.0 / frame.d1, 1.0 / frame.d2, 1.0 / frame.d3};
        default:
            return {1.0, 1.0, 1.0};
    }
}

// Find the root of the strictly monotone function f on the side of `start`
// indicated by `dir` (+1: f increasing to the right of start, search right;
// -1: search left), with f(start) < 0 and f -> +inf in the search direction.
double monotone_root(const std::function<double(double)>& f, double start, int dir) {
    double step = 1.0;
    double lo = start, hi = start + dir * step;
    while (f(hi) < 0.0) {
        lo = hi;
        step *= 2.0;
        hi = start + dir * step;
        if (step > 1e12) throw NumericError("phase integral: root bracketing failed");
    }
    for (int i = 0; i < 120; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct QuadrantMask {
    int ksign = 0; // 0 unrestricted, +1: k >= 0, -1: k <= 0
    int ysign = 0;
};

// Integral of (lambda - Psi)_+ (or the region volume) for the Zeta family;
// the inner y-integral is elementary, the outer k-integral is adaptive
// Gauss-Kronrod.
double integrate_zeta(const ModelParams& params, Weights w, double lambda, bool volume,
                      double& err) {
    err = 0.0;
    const double r = kTwoPi * params.b;
    const double zeta = params.zeta;
    if (zeta == 0.0)
        throw RangeError("phase integral diverges for zeta = 0 (region unbounded)");
    const double vmin = 2.0 * w.w2 * std::sqrt(zeta);
    if (lambda <= 2.0 * w.w1 + vmin) return 0.0;
    const double kmax = std::acosh((lambda - vmin) / (2.0 * w.w1)) / r;

    auto inner = [&](double k) {
        double mu = lambda - 2.0 * w.w1 * std::cosh(r * k);
        if (mu <= vmin) return 0.0;
        // w2 e^{ry} + zeta w2 e^{-ry} = mu: roots of w2 E^2 - mu E + w2 zeta.
        double disc = std::sqrt(mu * mu - 4.0 * w.w2 * w.w2 * zeta);
        double Ep = (mu + disc) / (2.0 * w.w2);
        double Em = (w.w2 * zeta) / (w.w2 * Ep); // product of roots = zeta
        double yp = std::log(Ep) / r, ym = std::log(Em) / r;
        if (volume) return yp - ym;
        return mu * (yp - ym) - (w.w2 / r) * (Ep - Em) -
               (w.w2 * zeta / r) * (1.0 / Em - 1.0 / Ep);
    };
    double e = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        inner, -kmax, kmax, 14, 1e-9, &e);
    err = e;
    return val;
}

double mn_inner_min(double alpha, double beta, int n) {
    // min over y of alpha e^{ry} + beta e^{-n r y}.
    double p = 1.0 / (n + 1.0);
    return std::pow(alpha, n * p) * std::pow(beta, p) *
           (std::pow(static_cast<double>(n), p) + std::pow(static_cast<double>(n), -n * p));
}

double integrate_mn(const ModelParams& params, Weights w, double lambda, bool volume,
                    QuadrantMask q, double& err) {
    err = 0.0;
    const double r = kTwoPi * params.b;
    const int m = params.m, n = params.n;

    // Global minimizer: with T = (w3 (w1/m)^m (w2/n)^n)^{1/(1+m+n)} the three
    // terms take values mT, nT, T and Psi_min = (m+n+1) T.
    double T = std::pow(w.w3 * std::pow(w.w1 / m, m) * std::pow(w.w2 / n, n),
                        1.0 / (1.0 + m + n));
    if (lambda <= (m + n + 1.0) * T) return 0.0;
    double kstar = -std::log(m * T / w.w1) / r;

    auto g = [&](double k) {
        return w.w1 * std::exp(-r * k) + mn_inner_min(w.w2, w.w3 * std::exp(r * m * k), n);
    };
    auto resid = [&](double k) { return g(k) - lambda; };
    double kLo = monotone_root(resid, kstar, -1);
    double kHi = monotone_root(resid, kstar, +1);
    if (q.ksign > 0) kLo = std::max(kLo, 0.0);
    if (q.ksign < 0) kHi = std::min(kHi, 0.0);
    if (kLo >= kHi) return 0.0;

    auto inner = [&](double k) {
        double mu = lambda - w.w1 * std::exp(-r * k);
        double beta = w.w3 * std::exp(r * m * k);
        if (mu <= mn_inner_min(w.w2, beta, n)) return 0.0;
        double ymin = std::log(n * beta / w.w2) / (r * (1.0 + n));
        auto h = [&](double y) {
            return w.w2 * std::exp(r * y) + beta * std::exp(-r * n * y) - mu;
        };
        double yl = monotone_root(h, ymin, -1);
        double yh = monotone_root(h, ymin, +1);
        if (q.ysign > 0) yl = std::max(yl, 0.0);
        if (q.ysign < 0) yh = std::min(yh, 0.0);
        if (yl >= yh) return 0.0;
        if (volume) return yh - yl;
        return mu * (yh - yl) - (w.w2 / r) * (std::exp(r * yh) - std::exp(r * yl)) -
               (beta / (r * n)) * (std::exp(-r * n * yl) - std::exp(-r * n * yh));
    };
    double e = 0.0;
    double val = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        inner, kLo, kHi, 14, 1e-9, &e);
    err = e;
    return val;
}

double integrate_region(const ModelParams& params, Weights w, double lambda, bool volume,
                        QuadrantMask q, double& err) {
    if (params.family == Family::Zeta) {
        if (q.ksign != 0 || q.ysign != 0)
            throw ParamError("quadrant restriction is MN-specific");
        return integrate_zeta(params, w, lambda, volume, err);
    }
    return integrate_mn(params, w, lambda, volume, q, err);
}

} // namespace

PhaseIntegralReport phase_integral(const ModelParams& params, const CoherentFrame& frame,
                                   SymbolVariant variant, double lambda) {
    if (!(lambda > 0.0)) throw ParamError("phase_integral requires lambda > 0");
    PhaseIntegralReport rep;
    rep.variant = variant;
    rep.lambda = lambda;
    rep.params = params;
    rep.frame = frame;
    Weights w = variant_weights(frame, variant);
    double err = 0.0;
    rep.value = integrate_region(params, w, lambda, variant == SymbolVariant::ClassicalVolume,
                                 QuadrantMask{}, err);
    rep.error_estimate = err;
    return rep;
}

SandwichReport sandwich_check(const SpectrumResult& spec, const CoherentFrame& frame,
                              const std::vector<double>& lambda_grid) {
    if (lambda_grid.empty()) throw ParamError("sandwich_check requires a nonempty lambda grid");
    if (!spec.params) throw ParamError("spectrum carries no model parameters");
    SandwichReport report;
    for (double lambda : lambda_grid) {
        double riesz = riesz_mean(spec, lambda); // throws RangeError beyond trusted
        auto lower = phase_integral(*spec.params, frame, SymbolVariant::LowerSymbol, lambda);
        auto upper = phase_integral(*spec.params, frame, SymbolVariant::UpperSymbol, lambda);
        double cert_budget = 0.0;
        for (int i = 0; i < spec.certified_count; ++i)
            if (spec.eigenvalues[i] < lambda) cert_budget += spec.certificates[i];
        double budget = lower.error_estimate + upper.error_estimate + cert_budget +
                        1e-12 * std::max({lower.value, upper.value, riesz, 1.0});
        SandwichRow row{lambda, lower.value, riesz, upper.value, budget,
                        lower.value <= riesz + budget && riesz <= upper.value + budget};
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

double leading_coefficient(const ModelParams& params) {
    double b = params.b;
    if (params.family == Family::Zeta) return 1.0 / ((kPi * b) * (kPi * b));
    double m = params.m, n = params.n;
    double c = (m + n + 1.0) * (m + n + 1.0) / (2.0 * m * n);
    return c / ((kTwoPi * b) * (kTwoPi * b));
}

WeylFit weyl_fit_samples(const std::vector<std::pair<double, double>>& samples) {
    const int points = static_cast<int>(samples.size());
    if (points < 3) throw ParamError("weyl fit needs at least 3 samples");
    double lambda_lo = samples.front().first, lambda_hi = samples.front().first;
    for (const auto& [lam, _] : samples) {
        if (!(lam >= std::exp(1.0)))
            throw ParamError("weyl fit requires lambda >= e");
        lambda_lo = std::min(lambda_lo, lam);
        lambda_hi = std::max(lambda_hi, lam);
    }
    Eigen::MatrixXd X(points, 3);
    Eigen::VectorXd yv(points);
    for (int i = 0; i < points; ++i) {
        double lam = samples[i].first;
        double L = std::log(lam);
        X(i, 0) = lam * L * L;
        X(i, 1) = lam * L;
        X(i, 2) = lam;
        yv(i) = samples[i].second;
    }
    Eigen::Vector3d scale;
    for (int j = 0; j < 3; ++j) scale(j) = std::sqrt(X.col(j).squaredNorm() / points);
    Eigen::MatrixXd Xs = X.array().rowwise() / scale.transpose().array();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Xs, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.singularValues()(2) < 1e-10 * svd.singularValues()(0))
        throw NumericError("weyl_fit design matrix is ill-conditioned; widen the window");
    Eigen::Vector3d coef_s = svd.solve(yv);
    Eigen::Vector3d coef = coef_s.array() / scale.array();

    WeylFit fit;
    fit.A = coef(0);
    fit.B = coef(1);
    fit.C = coef(2);
    fit.lambda_lo = lambda_lo;
    fit.lambda_hi = lambda_hi;
    double rms_y = std::sqrt(yv.squaredNorm() / points);
    fit.residual = std::sqrt((X * coef - yv).squaredNorm() / points) / std::max(rms_y, 1e-300);
    return fit;
}

WeylFit weyl_fit(const SpectrumResult& spec, double lambda_lo, double lambda_hi, int points) {
    if (!(lambda_lo >= std::exp(1.0)))
        throw ParamError("weyl_fit requires lambda_lo >= e");
    if (!(lambda_hi > lambda_lo)) throw ParamError("weyl_fit window is empty");
    points = std::max(points, 30);
    std::vector<std::pair<double, double>> samples(points);
    for (int i = 0; i < points; ++i) {
        double lam = lambda_lo * std::pow(lambda_hi / lambda_lo,
                                          static_cast<double>(i) / (points - 1));
        lam = std::min(std::max(lam, lambda_lo), lambda_hi); // exp/log round-trip drift
        samples[i] = {lam, riesz_mean(spec, lam)};
    }
    WeylFit fit = weyl_fit_samples(samples);
    fit.lambda_lo = lambda_lo;
    fit.lambda_hi = lambda_hi;
    return fit;
}

KaramataReport karamata_check(const SpectrumResult& spec, const std::vector<double>& t_grid,
                              double band) {
    if (t_grid.empty()) throw ParamError("karamata_check requires a nonempty t grid");
    for (double t : t_grid)
        if (!(t > 0.0)) throw ParamError("karamata_check requires positive t");
    if (!spec.params) throw ParamError("spectrum carries no model parameters");
    double A_lead = leading_coefficient(*spec.params);

    std::vector<double> ts(t_grid);
    std::sort(ts.begin(), ts.end(), std::greater<>());
    KaramataReport report;
    report.band = band;
    for (double t : ts) {
        HeatTraceResult h = heat_trace(spec, t);
        double lg = std::log(t);
        KaramataRow row;
        row.t = t;
        row.ratio = h.value / (A_lead * lg * lg);
        row.tail_fraction = h.value > 0.0 ? h.tail_bound / h.value : 0.0;
        row.usable = !h.precision_warning && t < 1.0;
        report.rows.push_back(row);
    }
    std::vector<const KaramataRow*> usable;
    for (const auto& r : report.rows)
        if (r.usable) usable.push_back(&r);
    if (usable.empty())
        throw NumericError("heat-trace tail bound dominates at every t in the grid; "
                           "largest t tried: " + std::to_string(ts.front()));
    report.smallest_usable_t = usable.back()->t;
    report.last_within_band = std::abs(usable.back()->ratio - 1.0) <= band;
    // Monotone approach of |ratio - 1| over the final usable decade.
    double decade_lo = report.smallest_usable_t;
    bool monotone = true;
    double prev_gap = -1.0;
    for (const auto* r : usable) {
        if (r->t > 10.0 * decade_lo) continue;
        double gap = std::abs(r->ratio - 1.0);
        if (prev_gap >= 0.0 && gap > prev_gap + 1e-12) monotone = false;
        prev_gap = gap;
    }
    report.monotone_trend = monotone;
    return report;
}

QuadrantReport quadrant_asymptotics(const ModelParams& params, const CoherentFrame& frame,
                                    double lambda) {
    if (params.family != Family::MN)
        throw ParamError("quadrant_asymptotics requires the MN family");
    if (!(lambda > 1.0)) throw ParamError("quadrant_asymptotics requires lambda > 1");
    QuadrantReport rep;
    rep.lambda = lambda;
    const double m = params.m, n = params.n;
    const double b = params.b;
    Weights w = variant_weights(frame, SymbolVariant::UpperSymbol);

    static const QuadrantMask masks[4] = {
        {+1, +1}, {-1, +1}, {-1, -1}, {+1, -1}};
    for (int i = 0; i < 4; ++i) {
        double err = 0.0;
        rep.integral[i] = integrate_mn(params, w, lambda, false, masks[i], err);
    }
    double unit = lambda * std::log(lambda) * std::log(lambda) / ((kTwoPi * b) * (kTwoPi * b));
    rep.predicted[0] = (n + 2.0) / (2.0 * m) * unit;
    rep.predicted[1] = unit;
    rep.predicted[2] = (m + 2.0) / (2.0 * n) * unit;
    rep.predicted[3] = 1.0 / (2.0 * m * n) * unit;

    // lambda = d4 u^{-n} + u, d4 = d3 d2^n; the relevant root is on the
    // increasing branch, above the minimizer u* = (n d4)^{1/(n+1)}.
    double d4 = frame.d3 * std::pow(frame.d2, n);
    double ustar = std::pow(n * d4, 1.0 / (n + 1.0));
    auto f = [&](double u) { return d4 * std::pow(u, -n) + u - lambda; };
    rep.lambda_tilde = monotone_root(f, ustar, +1);
    return rep;
}

} // namespace fdspec

#include "fdspec/coherent.hpp"

#include <cmath>
#include <functional>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "quad_util.hpp"

namespace fdspec {

namespace {

using Complex = std::complex<double>;

double gaussian_norm_const(double a) { return std::pow(a / kPi, 0.25); }

Complex gaussian_window(double a, Complex z) {
    return gaussian_norm_const(a) * std::exp(-a * z * z / 2.0);
}

} // namespace

TestFunction TestFunction::ground_coherent(const CoherentFrame& frame, double y) {
    TestFunction f;
    f.basis.size = 1;
    f.basis.omega = frame.a;
    f.basis.center = y;
    f.coeffs = Eigen::VectorXcd::Ones(1);
    return f;
}

std::complex<double> test_function_value(const TestFunction& psi, std::complex<double> x) {
    const int J = static_cast<int>(psi.coeffs.size());
    if (J == 0) return 0.0;
    const double omega = psi.basis.omega;
    Complex u = x - psi.basis.center;
    // Normalized Hermite-function recurrence, valid for complex arguments.
    Complex h0 = gaussian_norm_const(omega) * std::exp(-omega * u * u / 2.0);
    Complex acc = psi.coeffs(0) * h0;
    Complex hm = 0.0, h = h0;
    for (int j = 1; j < J; ++j) {
        Complex hn = (std::sqrt(2.0 * omega) * u * h - std::sqrt(j - 1.0) * hm) / std::sqrt(static_cast<double>(j));
        hm = h;
        h = hn;
        acc += psi.coeffs(j) * h;
    }
    return acc;
}

namespace {

struct Window {
    double center;
    double halfwidth;
};

Window transform_window(const TestFunction& psi, double a, double y, double rate) {
    const double omega = psi.basis.omega;
    const double c = psi.basis.center;
    const int J = static_cast<int>(psi.coeffs.size());
    double xc = (a * y + omega * c - rate) / (a + omega);
    double R = std::sqrt(2.0 * (42.0 + J) / (a + omega)) + std::sqrt(2.0 * (J + 1.0) / omega);
    return {xc, R};
}

Complex transform_integrand(const TestFunction& psi, double a, PhasePoint p, double rate,
                            double x) {
    Complex phase = std::exp(Complex(0.0, -kTwoPi * p.k * x));
    return phase * gaussian_window(a, Complex(x - p.y)) * std::exp(-rate * x) *
           test_function_value(psi, x);
}

Complex adaptive_transform(const TestFunction& psi, double a, PhasePoint p, double rate) {
    if (psi.coeffs.size() == 0) return 0.0;
    Window w = transform_window(psi, a, p.y, rate);
    auto re = [&](double x) { return transform_integrand(psi, a, p, rate, x).real(); };
    auto im = [&](double x) { return transform_integrand(psi, a, p, rate, x).imag(); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double lo = w.center - w.halfwidth, hi = w.center + w.halfwidth;
    return {GK::integrate(re, lo, hi, 12, 1e-12), GK::integrate(im, lo, hi, 12, 1e-12)};
}

// Fixed-rule transform evaluator for the 2D phase-space quadratures: one
// Gauss-Legendre rule sized for the largest |k| in the integration box.
class TransformEvaluator {
public:
    TransformEvaluator(const TestFunction& psi, double a, double kmax)
        : psi_(psi), a_(a) {
        Window w = transform_window(psi, a, 0.0, 0.0);
        R_ = w.halfwidth;
        int nodes = 80 + static_cast<int>(8.0 * kmax * R_);
        std::tie(x_, w_) = quad::gauss_legendre(nodes);
    }

    Complex operator()(PhasePoint p) const {
        Window w = transform_window(psi_, a_, p.y, 0.0);
        Complex acc = 0.0;
        for (int i = 0; i < x_.size(); ++i) {
            double x = w.center + w.halfwidth * x_(i);
            acc += w_(i) * transform_integrand(psi_, a_, p, 0.0, x);
        }
        return acc * w.halfwidth;
    }

private:
    const TestFunction& psi_;
    double a_;
    double R_;
    Eigen::VectorXd x_, w_;
};

struct Box {
    double k_half;
    double y_lo, y_hi;
};

// Integration box where the Gaussian envelope of |psi~|^2 exceeds 1e-16 of
// its peak, enlarged to absorb an exponential weight e^{r |coord|}.
Box phase_space_box(const TestFunction& psi, double a, double rate_k, double rate_y) {
    const double omega = psi.basis.omega;
    const double c = psi.basis.center;
    const int J = static_cast<int>(psi.coeffs.size());
    const double T = 42.0 + J;
    double gy = a * omega / (a + omega);
    double gk = kTwoPi * kTwoPi / (a + omega);
    auto reach = [T](double gamma, double r) {
        return (r + std::sqrt(r * r + 2.0 * gamma * T)) / gamma;
    };
    double Ry = reach(gy, rate_y) + std::sqrt(2.0 * (J + 1.0) / omega);
    double Rk = reach(gk, rate_k);
    return {Rk, c - Ry, c + Ry};
}

// Fixed tensor Gauss-Legendre quadrature of weight(k,y) |psi~(k,y)|^2 over
// the box. |psi~|^2 is non-oscillatory and Gaussian-decaying, so fixed rules
// sized for the box dimensions converge superexponentially; the windowed
// samples of psi are computed once per y node and reused for every k node
// (the transform in k is a plain discrete sum over those samples).
double integrate_phase_space(const TestFunction& psi, double a, const Box& box,
                             const std::function<double(PhasePoint)>& weight) {
    if (psi.coeffs.size() == 0 || psi.coeffs.squaredNorm() == 0.0) return 0.0;
    Window w0 = transform_window(psi, a, 0.0, 0.0);
    const double R = w0.halfwidth;
    const int nx = 80 + static_cast<int>(8.0 * box.k_half * R);
    const double y_half = (box.y_hi - box.y_lo) / 2.0;
    const double y_mid = (box.y_hi + box.y_lo) / 2.0;
    const int nk = 60 + static_cast<int>(8.0 * box.k_half * R);
    const int ny = 60 + static_cast<int>(8.0 * y_half * std::sqrt(a + psi.basis.omega));
    auto [xg, xw] = quad::gauss_legendre(nx);
    auto [kg, kw] = quad::gauss_legendre(nk);
    auto [yg, yw] = quad::gauss_legendre(ny);

    std::vector<Complex> fx(nx);
    double total = 0.0;
    for (int iy = 0; iy < ny; ++iy) {
        const double y = y_mid + y_half * yg(iy);
        Window w = transform_window(psi, a, y, 0.0);
        for (int ix = 0; ix < nx; ++ix) {
            double x = w.center + w.halfwidth * xg(ix);
            fx[ix] = xw(ix) * gaussian_window(a, Complex(x - y)) * test_function_value(psi, x);
        }
        double row = 0.0;
        for (int ik = 0; ik < nk; ++ik) {
            const double k = box.k_half * kg(ik);
            Complex acc = 0.0;
            for (int ix = 0; ix < nx; ++ix) {
                double x = w.center + w.halfwidth * xg(ix);
                acc += std::polar(1.0, -kTwoPi * k * x) * fx[ix];
            }
            acc *= w.halfwidth;
            row += kw(ik) * weight({k, y}) * std::norm(acc);
        }
        total += yw(iy) * row;
    }
    return total * box.k_half * y_half;
}

} // namespace

std::complex<double> coherent_transform(const TestFunction& psi, const CoherentFrame& frame,
                                        PhasePoint p) {
    return adaptive_transform(psi, frame.a, p, 0.0);
}

std::complex<double> coherent_transform_weighted(const TestFunction& psi,
                                                 const CoherentFrame& frame, double rate,
                                                 PhasePoint p) {
    return adaptive_transform(psi, frame.a, p, rate);
}

PlancherelResult plancherel_check(const TestFunction& psi, const CoherentFrame& frame) {
    PlancherelResult res;
    res.rhs = psi.norm_squared();
    Box box = phase_space_box(psi, frame.a, 0.0, 0.0);
    res.lhs = integrate_phase_space(psi, frame.a, box, [](PhasePoint) { return 1.0; });
    res.pass = std::abs(res.lhs - res.rhs) <= 1e-8 * res.rhs + 1e-14;
    return res;
}

double quadratic_form_phase_space(const TestFunction& psi, const ModelParams& params,
                                  const CoherentFrame& frame) {
    double rate_k = kTwoPi * params.b;
    double rate_y = kTwoPi * params.b;
    if (params.family == Family::MN) {
        rate_k *= std::max(1, params.m);
        rate_y *= std::max(1, params.n);
    }
    Box box = phase_space_box(psi, frame.a, rate_k, rate_y);
    return integrate_phase_space(psi, frame.a, box, [&](PhasePoint p) {
        return upper_symbol(params, frame, p);
    });
}

LowerSymbolCheck lower_symbol_direct(const ModelParams& params, const CoherentFrame& frame,
                                     PhasePoint p) {
    const double a = frame.a;
    const double b = params.b;
    std::vector<std::pair<double, std::pair<double, double>>> terms;
    if (params.family == Family::Zeta) {
        terms = {{1.0, {-b, 0.0}},
                 {1.0, {b, 0.0}},
                 {1.0, {0.0, kTwoPi * b}},
                 {params.zeta, {0.0, -kTwoPi * b}}};
    } else {
        terms = {{1.0, {-b, 0.0}},
                 {1.0, {0.0, kTwoPi * b}},
                 {1.0, {b * params.m, -kTwoPi * b * params.n}}};
    }

    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    double total = 0.0;
    for (const auto& [coef, st] : terms) {
        if (coef == 0.0) continue;
        double s = st.first, t = st.second;
        // <e^{sP+tQ} e_{k,y}, e_{k,y}> = e^{-i s t/2} e^{2 pi k s}
        //   int e^{t x} g(x - i s - y) g(x - y) dx   (entire continuation of g).
        double xc = p.y + t / (2.0 * a);
        double R = std::sqrt(2.0 * 45.0 / a) + std::abs(t) / (2.0 * a) + std::abs(s);
        auto f = [&](double x) {
            Complex v = std::exp(t * x) * gaussian_window(a, Complex(x - p.y, -s)) *
                        gaussian_window(a, Complex(x - p.y));
            return v;
        };
        auto re = [&](double x) { return f(x).real(); };
        auto im = [&](double x) { return f(x).imag(); };
        Complex integral{GK::integrate(re, xc - R, xc + R, 12, 1e-13),
                         GK::integrate(im, xc - R, xc + R, 12, 1e-13)};
        Complex val = std::exp(Complex(0.0, -s * t / 2.0)) * std::exp(kTwoPi * p.k * s) * integral;
        total += coef * val.real();
    }
    LowerSymbolCheck check;
    check.quadrature = total;
    check.closed_form = lower_symbol(params, frame, p);
    check.pass = std::abs(check.quadrature - check.closed_form) <=
                 1e-8 * std::abs(check.closed_form);
    return check;
}

} // namespace fdspec

#include "fdspec/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <nlohmann/json.hpp>

#include "fdspec/asymptotics.hpp"
#include "fdspec/io.hpp"
#include "hra.hpp"

namespace fdspec {

SpectrumResult compute_spectrum(const OperatorMatrix& matrix) {
    hra::EigResult eig = hra::hermitian_eigenvalues(matrix);
    SpectrumResult s;
    s.eigenvalues = std::move(eig.values);
    s.certified_count = 0;
    s.params = matrix.params;
    s.backend = matrix.backend;
    s.resolution = matrix.resolution_desc();
    s.method = std::move(eig.method);
    s.warnings = std::move(eig.warnings);
    return s;
}

namespace {

struct GridPlan {
    GridSpec grid;
    double lambda_max;
};

// Choose the momentum cutoff K = N/(2L) and length L for a given N so the
// dominance margins K/K_min and L/L_min grow together across rungs
// (balanced margins converge fastest per point). Two hard caps: the kernel
// multiplier e^{2 pi b m K} must stay small enough that the extended-
// precision kernel synthesis keeps absolute errors below the double-
// precision entry floor, and pi b L must stay clear of double overflow.
// Returns nullopt with saturated=false when N is too small for the margins
// and saturated=true once both caps bind (larger N cannot refine further).
std::optional<GridPlan> plan_grid_rung(const ModelParams& params, int N,
                                       double lambda_max, bool& saturated) {
    saturated = false;
    double b = params.b;
    double K_min = std::acosh(std::max(5.0 * lambda_max, 2.0)) / (kTwoPi * b);
    double L_min = std::log(10.0 * lambda_max) / (kPi * b);
    double m_rate = params.family == Family::MN ? std::max(1, params.m) : 1.0;
    double K_cap = 26.0 / (kTwoPi * b * m_rate);
    if (K_min > K_cap) K_cap = K_min * 1.05; // dominance is non-negotiable
    double f = std::sqrt(N / (2.0 * K_min * L_min));
    if (f < 1.0) return std::nullopt;
    double K = std::min(K_min * f, K_cap);
    double L = N / (2.0 * K);
    // Keep every matrix entry exponent under 650 (builder hard-fails at 700):
    // position diagonal e^{pi b L}, and for MN the mixed-term corner weight
    // e^{pi b n L + 2 pi b m K}.
    double L_cap = 650.0 / (kPi * b);
    if (params.family == Family::MN)
        L_cap = std::min(L_cap, (650.0 - kTwoPi * b * params.m * K) /
                                    (kPi * b * params.n));
    if (L < L_min) return std::nullopt;
    if (L > L_cap) {
        saturated = true; // would need K above its accuracy cap
        return std::nullopt;
    }
    GridPlan plan;
    plan.grid.length = L;
    plan.grid.points = N;
    plan.grid.offset = default_center(params);
    plan.lambda_max = lambda_max;
    return plan;
}

double estimate_lambda_max(const ModelParams& params, int want,
                           const LadderOptions& options) {
    if (options.lambda_max) return *options.lambda_max;
    double A = leading_coefficient(params);
    double lam = 3.0 * std::exp(std::sqrt((want + 3.0) / A));
    return std::max(lam, 50.0);
}

} // namespace

SpectrumResult converged_spectrum(const ModelParams& params, Backend backend,
                                  int want, double tol, const LadderOptions& options) {
    if (want < 1) throw ParamError("want must be >= 1");
    if (!(tol > 0.0)) throw ParamError("tol must be positive");

    SpectrumResult result;
    result.params = params;
    result.backend = backend;
    if (params.family == Family::Zeta && params.zeta == 0.0)
        result.warnings.push_back(
            "zeta = 0: spectrum is purely absolutely continuous on [2,inf); "
            "the ladder is not expected to converge");

    std::vector<double> prev;
    std::vector<double> changes;
    int certified = 0;
    bool converged = false;

    const std::vector<int>& sizes =
        backend == Backend::Oscillator ? options.oscillator_sizes : options.grid_sizes;
    double lambda_max = backend == Backend::Grid
                            ? estimate_lambda_max(params, want, options)
                            : 0.0;

    for (int N : sizes) {
        OperatorMatrix matrix;
        try {
            if (backend == Backend::Oscillator) {
                OscillatorBasisSpec basis;
                basis.size = N;
                basis.omega = options.omega;
                basis.center = options.center.value_or(default_center(params));
                matrix = build_matrix_oscillator(params, basis);
            } else {
                bool saturated = false;
                auto plan = plan_grid_rung(params, N, lambda_max, saturated);
                if (!plan) {
                    if (saturated) {
                        result.warnings.push_back(
                            "ladder stopped: grid accuracy caps saturated at N=" +
                            std::to_string(N));
                        break;
                    }
                    continue; // N too small for the dominance margins
                }
                matrix = build_matrix_grid(params, plan->grid, plan->lambda_max);
            }
        } catch (const ResolutionError& e) {
            result.warnings.push_back(std::string("ladder stopped: ") + e.what());
            break;
        }
        hra::EigResult eig = hra::hermitian_eigenvalues(matrix, options.dd_max_size);
        for (auto& w : eig.warnings)
            result.warnings.push_back(matrix.resolution_desc() + ": " + w);

        if (eig.method == "dense") {
            // Fallback rungs carry absolute-error eigenvalues; never chain
            // them into certificates, and never overwrite a factored rung.
            if (result.eigenvalues.empty()) {
                result.eigenvalues = eig.values;
                result.resolution = matrix.resolution_desc();
                result.method = eig.method;
            }
            result.warnings.push_back(matrix.resolution_desc() +
                                      ": rung excluded from certification (dense fallback)");
            continue;
        }

        if (!prev.empty()) {
            int limit = static_cast<int>(std::min(prev.size(), eig.values.size()));
            limit = std::min(limit, want);
            changes.assign(limit, 0.0);
            certified = 0;
            for (int i = 0; i < limit; ++i) {
                changes[i] = std::abs(prev[i] - eig.values[i]);
                if (certified == i && changes[i] <= tol * std::abs(eig.values[i]))
                    certified = i + 1;
            }
            result.eigenvalues = eig.values;
            result.certificates = changes;
            result.certified_count = certified;
            result.resolution = matrix.resolution_desc();
            result.method = eig.method;
            if (certified >= want) {
                converged = true;
                break;
            }
        } else {
            result.eigenvalues = eig.values;
            result.resolution = matrix.resolution_desc();
            result.method = eig.method;
        }
        prev = std::move(eig.values);
    }

    result.partial = !converged;
    if (result.partial)
        result.warnings.push_back("ladder exhausted before certifying " +
                                  std::to_string(want) + " eigenvalues at tol " +
                                  io::format_double(tol));
    if (params.family == Family::MN && result.certified_count > 0 &&
        !(result.eigenvalues[0] > 0.0))
        throw NumericError("MN family produced a certified nonpositive ground eigenvalue");
    return result;
}

double trusted_lambda(const SpectrumResult& spec) {
    if (spec.certified_count < 1)
        throw RangeError("spectrum has no certified eigenvalues");
    int i = spec.certified_count - 1;
    return spec.eigenvalues[i] - spec.certificates[i];
}

namespace {

void check_trusted(const SpectrumResult& spec, double lambda) {
    double lim = trusted_lambda(spec);
    if (lambda > lim) {
        std::ostringstream os;
        os << "lambda=" << lambda << " beyond trusted range " << lim;
        throw RangeError(os.str());
    }
}

} // namespace

int counting_function(const SpectrumResult& spec, double lambda) {
    check_trusted(spec, lambda);
    int c = 0;
    for (int i = 0; i < spec.certified_count; ++i)
        if (spec.eigenvalues[i] < lambda) ++c;
    return c;
}

double riesz_mean(const SpectrumResult& spec, double lambda) {
    check_trusted(spec, lambda);
    double s = 0.0;
    for (int i = 0; i < spec.certified_count; ++i) {
        double d = lambda - spec.eigenvalues[i];
        if (d > 0.0) s += d;
    }
    return s;
}

TailEnvelope tail_envelope(const SpectrumResult& spec) {
    TailEnvelope env;
    int M = spec.certified_count;
    if (M < 1) throw RangeError("spectrum has no certified eigenvalues");
    env.lambda_cut = spec.eigenvalues[M - 1];
    if (M >= 8) {
        // Least squares of N(lambda_j) = j against {log^2, log} on the upper
        // half of the certified range.
        double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
        for (int j = M / 2; j < M; ++j) {
            double L = std::log(spec.eigenvalues[j]);
            if (!(L > 0.0)) continue;
            double x1 = L * L, x2 = L, y = j + 1.0;
            s11 += x1 * x1;
            s12 += x1 * x2;
            s22 += x2 * x2;
            r1 += x1 * y;
            r2 += x2 * y;
        }
        double det = s11 * s22 - s12 * s12;
        if (det > 0.0) {
            env.A = (r1 * s22 - r2 * s12) / det;
            env.B = (s11 * r2 - s12 * r1) / det;
        }
    }
    if (env.A <= 0.0) {
        if (!spec.params) throw NumericError("tail envelope fit failed and no params available");
        env.A = leading_coefficient(*spec.params);
        env.B = 0.0;
    }
    env.A *= 2.0; // conservative inflation: only the log^2 order is rigorous, not the constant
    return env;
}

HeatTraceResult heat_trace(const SpectrumResult& spec, double t) {
    if (!(t > 0.0)) throw ParamError("heat_trace requires t > 0");
    HeatTraceResult out;
    for (int i = 0; i < spec.certified_count; ++i)
        out.value += std::exp(-t * spec.eigenvalues[i]);
    if (spec.certified_count > 0 &&
        spec.certified_count < static_cast<int>(spec.eigenvalues.size())) {
        TailEnvelope env = tail_envelope(spec);
        double cut = env.lambda_cut;
        auto integrand = [&](double lam) {
            return std::exp(-t * lam) * (2.0 * env.A * std::log(lam) + env.B) / lam;
        };
        out.tail_bound = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            integrand, cut, std::numeric_limits<double>::infinity(), 10, 1e-10);
    }
    out.precision_warning = out.tail_bound > 0.1 * out.value;
    return out;
}

TraceInverseResult trace_inverse(const SpectrumResult& spec) {
    TraceInverseResult out;
    for (int i = 0; i < spec.certified_count; ++i) {
        if (!(spec.eigenvalues[i] > 0.0))
            throw NumericError("trace_inverse requires positive eigenvalues");
        out.partial += 1.0 / spec.eigenvalues[i];
    }
    if (spec.certified_count > 0) {
        TailEnvelope env = tail_envelope(spec);
        double cut = env.lambda_cut;
        // integral_cut^inf (2A log(l) + B) / l^2 dl, the envelope density over 1/l.
        out.tail_bound = (2.0 * env.A * std::log(cut) + env.B + 2.0 * env.A) / cut;
    }
    return out;
}

CountBounds count_bounds_from_riesz(const std::function<double(double)>& riesz_at,
                                    double lambda, double /*weyl_A*/) {
    if (!(lambda > 1.0))
        throw RangeError("count bounds require lambda > 1 (root equation unbracketed)");
    // f(tau) = 2 tau - log(lambda (1 + tau)) is strictly increasing with
    // f(0) = -log(lambda) < 0; bracket by doubling, then bisect.
    auto f = [&](double tau) { return 2.0 * tau - std::log(lambda * (1.0 + tau)); };
    double hi = 1.0;
    while (f(hi) < 0.0) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    CountBounds cb;
    cb.tau0 = 0.5 * (lo + hi);
    cb.mu = (1.0 + cb.tau0) * lambda;
    double rho = cb.tau0 * lambda;
    cb.upper = riesz_at(cb.mu) / rho;
    cb.lower = riesz_at(lambda) / lambda;
    return cb;
}

std::string spectrum_to_csv(const SpectrumResult& spec,
                            const std::vector<std::string>& header_lines) {
    std::ostringstream os;
    for (const auto& line : header_lines) os << "# " << line << "\r\n";
    os << "index,eigenvalue,certificate\r\n";
    for (size_t i = 0; i < spec.eigenvalues.size(); ++i) {
        os << (i + 1) << "," << io::format_double(spec.eigenvalues[i]) << ",";
        if (static_cast<int>(i) < spec.certified_count)
            os << io::format_double(spec.certificates[i]);
        os << "\r\n";
    }
    return os.str();
}

std::string spectrum_to_json(const SpectrumResult& spec) {
    nlohmann::json j;
    if (spec.params) {
        nlohmann::json p;
        p["family"] = spec.params->family == Family::Zeta ? "zeta" : "mn";
        p["b"] = spec.params->b;
        if (spec.params->family == Family::Zeta) p["zeta"] = spec.params->zeta;
        else {
            p["m"] = spec.params->m;
            p["n"] = spec.params->n;
        }
        j["params"] = p;
    }
    j["backend"] = spec.backend == Backend::Oscillator ? "osc" : "grid";
    j["resolution"] = spec.resolution;
    j["method"] = spec.method;
    j["partial"] = spec.partial;
    j["certified_count"] = spec.certified_count;
    j["eigenvalues"] = spec.eigenvalues;
    j["certificates"] = spec.certificates;
    j["warnings"] = spec.warnings;
    return j.dump(2);
}

} // namespace fdspec

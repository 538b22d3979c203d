#include "fdspec/quantization.hpp"

#include <cmath>
#include <sstream>

namespace fdspec {

DdMatrix DdMatrix::zero(int n, bool complex_valued) {
    DdMatrix M;
    M.n = n;
    M.complex_valued = complex_valued;
    M.re.assign(static_cast<size_t>(n) * n, Dd(0.0));
    if (complex_valued) M.im.assign(static_cast<size_t>(n) * n, Dd(0.0));
    return M;
}

std::string OperatorMatrix::resolution_desc() const {
    std::ostringstream os;
    if (backend == Backend::Oscillator) {
        const auto& b = std::get<OscillatorBasisSpec>(resolution);
        os << "osc(N=" << b.size << ",omega=" << b.omega << ",center=" << b.center << ")";
    } else {
        const auto& g = std::get<GridSpec>(resolution);
        os << "grid(L=" << g.length << ",N=" << g.points << ",offset=" << g.offset << ")";
    }
    return os.str();
}

namespace {

void validate_basis(const OscillatorBasisSpec& basis) {
    if (basis.size < 2) throw ParamError("oscillator basis size must be >= 2");
    if (!(basis.omega > 0.0)) throw ParamError("oscillator omega must be positive");
}

void check_entry_overflow(double s, double t, const OscillatorBasisSpec& basis) {
    double omega = basis.omega;
    double r2 = (s * s * omega + t * t / omega) / 2.0;
    // Largest Laguerre value grows like e^{2 sqrt(r2 N)}; the largest entry
    // magnitude like e^{t c + r2/2 + 2 sqrt(r2 N)}. Both must stay in range.
    double lag_log = 2.0 * std::sqrt(r2 * basis.size);
    double entry_log = std::abs(t * basis.center) + r2 / 2.0 + lag_log;
    if (entry_log > 660.0 || lag_log > 660.0)
        throw ResolutionError(
            "exp_linear_matrix: entries of e^{sP+tQ} would overflow at basis size " +
            std::to_string(basis.size) + "; reduce the basis size or adjust omega");
}

// Accumulate coef * <phi_i| e^{s P + t Q} |phi_j> into H (complex storage).
//
// With alpha = (-i s sqrt(omega) + t / sqrt(omega)) / sqrt(2) the entry at
// i = j + d is
//   e^{t c + |alpha|^2/2} * sqrt(j!/i!) |alpha|^d L_j^{(d)}(-|alpha|^2) * u^d
// where u = conj(alpha)/|alpha|; the conjugate goes to (j, i). The Laguerre
// polynomials at negative argument are evaluated by their three-term
// recurrence, which has all-positive terms and is forward stable.
void accumulate_exp_linear(DdMatrix& H, double coef, double s, double t,
                           const OscillatorBasisSpec& basis) {
    if (coef == 0.0) return;
    const int N = basis.size;
    const Dd omega(basis.omega);
    const Dd sd(s), td(t);
    const Dd sqw = dd_sqrt(omega);
    const Dd r2 = (sd * sd * omega + td * td / omega) * Dd(0.5);
    const Dd pref = Dd(coef) * dd_exp(td * Dd(basis.center) + r2 * Dd(0.5));

    if (r2.hi == 0.0) {
        for (int j = 0; j < N; ++j) H.real_at(j, j) += pref;
        return;
    }
    const Dd r = dd_sqrt(r2);
    // Unit phase u = conj(alpha)/|alpha|.
    const Dd denom = dd_sqrt(Dd(2.0)) * r;
    const DdComplex u{(td / sqw) / denom, (sd * sqw) / denom};

    // The damping factor c = sqrt(j!/(j+d)!) r^d underflows and the Laguerre
    // value overflows long before their product (the actual entry) leaves the
    // double range, so both carry an explicit binary exponent.
    Dd head(1.0);  // sqrt(0!/d!) r^d times 2^h_exp, updated over d
    int h_exp = 0;
    DdComplex ph(Dd(1.0)); // u^d
    for (int d = 0; d < N; ++d) {
        Dd c = head; // sqrt(j!/(j+d)!) r^d times 2^c_exp, updated over j
        int c_exp = h_exp;
        Dd lag(1.0), lag_prev(0.0); // L_j^{(d)}(-r^2) times 2^-l_exp
        int l_exp = 0;
        for (int j = 0; j + d < N; ++j) {
            if (j > 0) {
                Dd next = (Dd(2.0 * (j - 1) + d + 1) + r2) * lag - Dd(j - 1.0 + d) * lag_prev;
                next = next / Dd(static_cast<double>(j));
                lag_prev = lag;
                lag = next;
                c = c * dd_sqrt(Dd(static_cast<double>(j)) / Dd(static_cast<double>(j + d)));
                if (lag.hi > 0x1p256) {
                    lag = dd_ldexp(lag, -256);
                    lag_prev = dd_ldexp(lag_prev, -256);
                    l_exp += 256;
                }
                if (c.hi != 0.0 && c.hi < 0x1p-256) {
                    c = dd_ldexp(c, 256);
                    c_exp -= 256;
                }
            }
            Dd prod = c * lag;
            int e = c_exp + l_exp;
            if (prod.hi != 0.0) { // renormalize so pref * prod cannot overflow
                int pe = std::ilogb(prod.hi) + 1;
                prod = dd_ldexp(prod, -pe);
                e += pe;
            }
            Dd val = dd_ldexp(pref * prod, e);
            int i = j + d;
            H.real_at(i, j) += val * ph.re;
            H.imag_at(i, j) += val * ph.im;
            if (d > 0) {
                H.real_at(j, i) += val * ph.re;
                H.imag_at(j, i) -= val * ph.im;
            }
        }
        head = head * r / dd_sqrt(Dd(d + 1.0));
        if (head.hi != 0.0 && head.hi < 0x1p-256) {
            head = dd_ldexp(head, 256);
            h_exp -= 256;
        }
        ph = ph * u;
    }
}

// Round a complex DdMatrix into an OperatorMatrix; detect exactly-real
// matrices and drop the imaginary storage from the refined copy.
OperatorMatrix finalize_from_dd(DdMatrix&& H, Backend backend,
                                std::variant<OscillatorBasisSpec, GridSpec> resolution,
                                std::optional<ModelParams> params, bool keep_refined) {
    const int N = H.n;
    bool real = true;
    for (const Dd& v : H.im)
        if (v.hi != 0.0 || v.lo != 0.0) { real = false; break; }

    OperatorMatrix M;
    M.backend = backend;
    M.resolution = std::move(resolution);
    M.params = std::move(params);
    M.is_real = real;
    M.entries.resize(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i)
            M.entries(i, j) = std::complex<double>(
                H.real_at(i, j).to_double(), real ? 0.0 : H.imag_at(i, j).to_double());
    double dev = (M.entries - M.entries.adjoint()).norm();
    if (dev > 1e-12 * M.entries.norm())
        throw NumericError("built matrix deviates from Hermitian beyond 1e-12 relative");
    M.entries = ((M.entries + M.entries.adjoint()) / 2.0).eval();
    if (keep_refined) {
        if (real) {
            H.im.clear();
            H.im.shrink_to_fit();
            H.complex_valued = false;
        }
        M.refined = std::make_shared<const DdMatrix>(std::move(H));
    }
    return M;
}

} // namespace

OperatorMatrix exp_linear_matrix(double s, double t, const OscillatorBasisSpec& basis) {
    validate_basis(basis);
    check_entry_overflow(s, t, basis);
    DdMatrix H = DdMatrix::zero(basis.size, true);
    accumulate_exp_linear(H, 1.0, s, t, basis);
    return finalize_from_dd(std::move(H), Backend::Oscillator, basis, std::nullopt, true);
}

double default_center(const ModelParams& params) {
    if (params.family == Family::Zeta) return 0.0;
    // Minimizer of e^{2 pi b y} + e^{-2 pi b n y} (classical symbol in y at
    // k = 0, dropping the k-only term): y = log(n) / (2 pi b (1 + n)).
    return std::log(static_cast<double>(params.n)) / (kTwoPi * params.b * (1.0 + params.n));
}

OperatorMatrix build_matrix_oscillator(const ModelParams& params, const OscillatorBasisSpec& basis) {
    validate_basis(basis);
    double b = params.b;
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
    for (const auto& [coef, st] : terms)
        if (coef != 0.0) check_entry_overflow(st.first, st.second, basis);

    DdMatrix H = DdMatrix::zero(basis.size, true);
    for (const auto& [coef, st] : terms)
        accumulate_exp_linear(H, coef, st.first, st.second, basis);
    return finalize_from_dd(std::move(H), Backend::Oscillator, basis, params, true);
}

namespace {

void validate_grid(const GridSpec& grid) {
    if (!(grid.length > 0.0)) throw ParamError("grid length must be positive");
    int N = grid.points;
    if (N < 8 || (N & (N - 1)) != 0)
        throw ParamError("grid points must be a power of two >= 8");
}

void check_boundary_dominance(double b, const GridSpec& grid, double lambda_max) {
    double pot_edge = std::exp(kTwoPi * b * grid.length / 2.0);
    double K = grid.momentum_cutoff();
    double kin_edge = 2.0 * std::cosh(kTwoPi * b * K);
    if (pot_edge >= 10.0 * lambda_max && kin_edge >= 10.0 * lambda_max) return;
    double L_need = std::log(10.0 * lambda_max) / (kPi * b);
    double K_need = std::acosh(5.0 * lambda_max) / (kTwoPi * b);
    int N_need = 8;
    while (N_need < 2.0 * L_need * K_need) N_need *= 2;
    std::ostringstream os;
    os << "grid boundary dominance violated for lambda_max=" << lambda_max
       << " (need e^{pi b L} and 2cosh(2 pi b K) >= 10 lambda_max); "
       << "suggest L >= " << L_need << ", N >= " << N_need;
    throw ResolutionError(os.str());
}

// Exact-symmetry tables of cos/sin(2 pi q / N), q = 0..N-1, in double-double.
void trig_tables(int N, std::vector<Dd>& c, std::vector<Dd>& s) {
    static const Dd kTwoPiDd(6.283185307179586477e+00, 2.449293598294706414e-16);
    Dd theta = kTwoPiDd / Dd(static_cast<double>(N));
    Dd s1, c1;
    dd_sincos_small(theta, s1, c1);
    c.assign(N, Dd(0.0));
    s.assign(N, Dd(0.0));
    c[0] = Dd(1.0);
    for (int q = 1; q <= N / 2; ++q) {
        c[q] = c[q - 1] * c1 - s[q - 1] * s1;
        s[q] = s[q - 1] * c1 + c[q - 1] * s1;
    }
    c[N / 2] = Dd(-1.0);
    s[N / 2] = Dd(0.0);
    if (N % 4 == 0) {
        c[N / 4] = Dd(0.0);
        s[N / 4] = Dd(1.0);
    }
    for (int q = 1; q < N / 2; ++q) {
        c[N - q] = c[q];
        s[N - q] = -s[q];
    }
}

// kern[r] = (1/N) sum_p mult_p e^{2 pi i p r / N}; the Toeplitz kernel of
// F^H diag(mult) F in the index DFT (offset phases cancel exactly because the
// multiplier is diagonal in momentum).
void momentum_kernel(const std::vector<Dd>& mult, const std::vector<Dd>& cos_t,
                     const std::vector<Dd>& sin_t, std::vector<DdComplex>& kern) {
    const int N = static_cast<int>(mult.size());
    kern.assign(N, DdComplex());
    const Dd inv_n = Dd(1.0) / Dd(static_cast<double>(N));
    for (int r = 0; r < N; ++r) {
        Dd re(0.0), im(0.0);
        for (int p = 0; p < N; ++p) {
            int q = static_cast<int>((static_cast<long long>(p) * r) % N);
            re += mult[p] * cos_t[q];
            im += mult[p] * sin_t[q];
        }
        kern[r] = {re * inv_n, im * inv_n};
    }
}

std::vector<Dd> signed_momenta_exp(double b, const GridSpec& grid, double rate_scale,
                                   bool cosh_form) {
    // rate in the exponent is rate_scale * 2 pi b * k_p with signed k_p = p~/L.
    const int N = grid.points;
    static const Dd kTwoPiDd(6.283185307179586477e+00, 2.449293598294706414e-16);
    std::vector<Dd> mult(N);
    Dd rate = kTwoPiDd * Dd(b) * Dd(rate_scale) / Dd(grid.length);
    for (int p = 0; p < N; ++p) {
        double pt = (p <= N / 2 - 1) ? p : p - N; // signed index; p = N/2 maps to -N/2
        Dd e = rate * Dd(pt);
        mult[p] = cosh_form ? dd_exp(e) + dd_exp(-e) : dd_exp(e);
    }
    return mult;
}

Dd grid_node(const GridSpec& grid, int j) {
    return Dd(grid.offset) + Dd(j - grid.points / 2) * (Dd(grid.length) / Dd(grid.points));
}

} // namespace

OperatorMatrix build_matrix_grid_free_part(double b, const GridSpec& grid) {
    validate_grid(grid);
    if (!(b > 0.0)) throw ParamError("b must be positive");
    const int N = grid.points;
    if (kTwoPi * b * grid.momentum_cutoff() > 700.0)
        throw ResolutionError("grid momentum multiplier overflows; reduce N/L");
    std::vector<Dd> cos_t, sin_t;
    trig_tables(N, cos_t, sin_t);
    std::vector<DdComplex> kern;
    momentum_kernel(signed_momenta_exp(b, grid, 1.0, true), cos_t, sin_t, kern);
    DdMatrix H = DdMatrix::zero(N, true);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
            const DdComplex& v = kern[(i - j + N) % N];
            H.real_at(i, j) = v.re;
            H.imag_at(i, j) = v.im;
        }
    return finalize_from_dd(std::move(H), Backend::Grid, grid, std::nullopt, N <= 1024);
}

OperatorMatrix build_matrix_grid(const ModelParams& params, const GridSpec& grid,
                                 double lambda_max) {
    validate_grid(grid);
    const int N = grid.points;
    const double b = params.b;
    check_boundary_dominance(b, grid, lambda_max);
    double m_rate = (params.family == Family::MN) ? static_cast<double>(params.m) : 1.0;
    if (kTwoPi * b * m_rate * grid.momentum_cutoff() > 700.0 ||
        kTwoPi * b * grid.length / 2.0 > 700.0)
        throw ResolutionError("grid multiplier overflows double range; reduce margins");
    // Mixed-term corner entries carry e^{pi b n L} from the split diagonal
    // weights on top of the momentum multiplier.
    if (params.family == Family::MN &&
        kPi * b * params.n * grid.length +
                kTwoPi * b * params.m * grid.momentum_cutoff() > 700.0)
        throw ResolutionError("grid mixed-term entries overflow double range; reduce length");

    std::vector<Dd> cos_t, sin_t;
    trig_tables(N, cos_t, sin_t);
    static const Dd kTwoPiDd(6.283185307179586477e+00, 2.449293598294706414e-16);
    const Dd tpb = kTwoPiDd * Dd(b);

    DdMatrix H = DdMatrix::zero(N, true);
    std::vector<DdComplex> kern;
    if (params.family == Family::Zeta) {
        momentum_kernel(signed_momenta_exp(b, grid, 1.0, true), cos_t, sin_t, kern);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const DdComplex& v = kern[(i - j + N) % N];
                H.real_at(i, j) = v.re;
                H.imag_at(i, j) = v.im;
            }
        for (int j = 0; j < N; ++j) {
            Dd x = grid_node(grid, j);
            H.real_at(j, j) += dd_exp(tpb * x) + Dd(params.zeta) * dd_exp(-(tpb * x));
        }
    } else {
        // U term: multiplier e^{-2 pi b k}.
        momentum_kernel(signed_momenta_exp(b, grid, -1.0, false), cos_t, sin_t, kern);
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const DdComplex& v = kern[(i - j + N) % N];
                H.real_at(i, j) = v.re;
                H.imag_at(i, j) = v.im;
            }
        // V term: diagonal e^{2 pi b x}.
        for (int j = 0; j < N; ++j)
            H.real_at(j, j) += dd_exp(tpb * grid_node(grid, j));
        // Mixed term via the exact symmetric splitting
        // e^{b m P - 2 pi b n Q} = e^{-pi b n Q} e^{b m P} e^{-pi b n Q}.
        momentum_kernel(signed_momenta_exp(b, grid, static_cast<double>(params.m), false),
                        cos_t, sin_t, kern);
        std::vector<Dd> Dhalf(N);
        for (int j = 0; j < N; ++j)
            Dhalf[j] = dd_exp(-(tpb * Dd(0.5 * params.n) * grid_node(grid, j)));
        for (int j = 0; j < N; ++j)
            for (int i = 0; i < N; ++i) {
                const DdComplex& v = kern[(i - j + N) % N];
                Dd w = Dhalf[i] * Dhalf[j];
                H.real_at(i, j) += w * v.re;
                H.imag_at(i, j) += w * v.im;
            }
    }
    return finalize_from_dd(std::move(H), Backend::Grid, grid, params, N <= 1024);
}

} // namespace fdspec

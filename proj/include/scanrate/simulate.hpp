#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "scanrate/blockstats.hpp"
#include "scanrate/rng.hpp"

namespace scanrate {

// ---------------------------------------------------------------------------
// Innovation families
// ---------------------------------------------------------------------------

struct InnovationSpec {
    enum class Family { stable, cauchy, gaussian, pareto, burr, burr_logmod };

    Family family = Family::gaussian;
    double alpha = 2.0;    // stable index
    double skew = 0.0;     // stable skewness in [-1, 1]
    double shape_a = 2.0;  // pareto tail index
    double scale = 1.0;    // pareto / burr scale
    double burr_c = 2.0;
    double burr_k = 0.5;

    static InnovationSpec stable(double alpha, double skew) {
        InnovationSpec s;
        s.family = Family::stable;
        s.alpha = alpha;
        s.skew = skew;
        return s;
    }
    static InnovationSpec cauchy() {
        InnovationSpec s;
        s.family = Family::cauchy;
        return s;
    }
    static InnovationSpec gaussian() { return {}; }
    static InnovationSpec pareto(double a, double scale) {
        InnovationSpec s;
        s.family = Family::pareto;
        s.shape_a = a;
        s.scale = scale;
        return s;
    }
    static InnovationSpec burr(double c, double scale, double k) {
        InnovationSpec s;
        s.family = Family::burr;
        s.burr_c = c;
        s.scale = scale;
        s.burr_k = k;
        return s;
    }
    static InnovationSpec burr_logmod(double c, double scale, double k) {
        InnovationSpec s = burr(c, scale, k);
        s.family = Family::burr_logmod;
        return s;
    }

    std::string id() const {
        switch (family) {
            case Family::stable:
                return "stable(" + std::to_string(alpha) + "," + std::to_string(skew) + ")";
            case Family::cauchy: return "cauchy";
            case Family::gaussian: return "gaussian";
            case Family::pareto:
                return "pareto(" + std::to_string(shape_a) + "," + std::to_string(scale) + ")";
            case Family::burr:
                return "burr(" + std::to_string(burr_c) + "," + std::to_string(scale) + "," +
                       std::to_string(burr_k) + ")";
            case Family::burr_logmod:
                return "burr-logmod(" + std::to_string(burr_c) + "," + std::to_string(scale) +
                       "," + std::to_string(burr_k) + ")";
        }
        return "?";
    }
};

/// One draw from the standard stable law S_alpha(1, skew, 0) in the classical
/// parameterization (totally skewed draws with alpha < 1 are supported on the
/// positive half line). Chambers-Mallows-Stuck construction; alpha = 1 uses
/// the exact limit form. Consumes exactly two stream values.
inline double sample_stable(double alpha, double skew, RandomStream& stream) {
    if (!(alpha > 0.0) || alpha > 2.0)
        throw std::invalid_argument("sample_stable: alpha must lie in (0, 2]");
    if (skew < -1.0 || skew > 1.0)
        throw std::invalid_argument("sample_stable: skew must lie in [-1, 1]");

    constexpr double half_pi = 1.5707963267948966;
    const double v = half_pi * (2.0 * stream.next_unit() - 1.0);  // uniform (-pi/2, pi/2)
    const double w = stream.next_exponential();

    if (alpha == 1.0) {
        if (skew == 0.0) return std::tan(v);
        const double a = half_pi + skew * v;
        return (a * std::tan(v) -
                skew * std::log(half_pi * w * std::cos(v) / a)) / half_pi;
    }
    if (skew == 0.0) {
        return std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
               std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
    }
    const double t = skew * std::tan(half_pi * alpha);
    const double b = std::atan(t) / alpha;
    const double s = std::pow(1.0 + t * t, 0.5 / alpha);
    return s * std::sin(alpha * (v + b)) / std::pow(std::cos(v), 1.0 / alpha) *
           std::pow(std::cos(v - alpha * (v + b)) / w, (1.0 - alpha) / alpha);
}

/// One innovation draw. Inverse-transform families (pareto, burr) consume one
/// stream value; gaussian and stable consume two.
inline double sample_innovation(const InnovationSpec& spec, RandomStream& stream) {
    switch (spec.family) {
        case InnovationSpec::Family::stable:
            return sample_stable(spec.alpha, spec.skew, stream);
        case InnovationSpec::Family::cauchy:
            return sample_stable(1.0, 0.0, stream);
        case InnovationSpec::Family::gaussian:
            return stream.next_gaussian();
        case InnovationSpec::Family::pareto: {
            if (!(spec.shape_a > 0.0) || !(spec.scale > 0.0))
                throw std::invalid_argument("pareto: parameters must be positive");
            // survival (1 + z/s)^(-a) on z >= 0
            const double u = stream.next_unit();
            return spec.scale * (std::pow(u, -1.0 / spec.shape_a) - 1.0);
        }
        case InnovationSpec::Family::burr: {
            if (!(spec.burr_c > 0.0) || !(spec.burr_k > 0.0) || !(spec.scale > 0.0))
                throw std::invalid_argument("burr: parameters must be positive");
            // survival (1 + (z/s)^c)^(-k) on z >= 0, tail index c*k
            const double u = stream.next_unit();
            return spec.scale * std::pow(std::pow(u, -1.0 / spec.burr_k) - 1.0, 1.0 / spec.burr_c);
        }
        case InnovationSpec::Family::burr_logmod: {
            InnovationSpec plain = spec;
            plain.family = InnovationSpec::Family::burr;
            const double z = sample_innovation(plain, stream);
            return z * std::max(1.0, std::log10(std::fabs(z)));
        }
    }
    throw std::logic_error("sample_innovation: unknown family");
}

// ---------------------------------------------------------------------------
// Linear filters
// ---------------------------------------------------------------------------

/// AR(1) recursion from X_0 = 0; the first burn_in values are discarded.
inline Series ar1_filter(const Series& innovations, double rho, int burn_in) {
    if (!(std::fabs(rho) < 1.0))
        throw std::invalid_argument("ar1_filter: |rho| must be < 1");
    if (burn_in < 0) throw std::invalid_argument("ar1_filter: negative burn-in");
    if (innovations.size() < static_cast<std::size_t>(burn_in))
        throw std::invalid_argument("ar1_filter: innovations shorter than burn-in");
    Series out;
    out.reserve(innovations.size() - static_cast<std::size_t>(burn_in));
    double x = 0.0;
    for (std::size_t t = 0; t < innovations.size(); ++t) {
        x = rho * x + innovations[t];
        if (t >= static_cast<std::size_t>(burn_in)) out.push_back(x);
    }
    return out;
}

/// Finite moving average sum_j coeff[j] * Z_{t-j}; needs coeff.size()-1 extra
/// leading innovations.
inline Series fir_filter(const Series& innovations, const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw std::invalid_argument("fir_filter: empty coefficients");
    const std::size_t lag = coeffs.size() - 1;
    if (innovations.size() <= lag)
        throw std::invalid_argument("fir_filter: innovations shorter than filter");
    Series out;
    out.reserve(innovations.size() - lag);
    for (std::size_t t = lag; t < innovations.size(); ++t) {
        double acc = 0.0;
        for (std::size_t j = 0; j < coeffs.size(); ++j) acc += coeffs[j] * innovations[t - j];
        out.push_back(acc);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fractional Gaussian noise
// ---------------------------------------------------------------------------

namespace detail {

// Iterative radix-2 complex FFT, in place. Size must be a power of two.
inline void fft_pow2(std::vector<double>& re, std::vector<double>& im, bool inverse) {
    const std::size_t n = re.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * 3.141592653589793238462643383280 /
                           static_cast<double>(len);
        const double wr = std::cos(ang), wi = std::sin(ang);
        for (std::size_t i = 0; i < n; i += len) {
            double cr = 1.0, ci = 0.0;
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::size_t a = i + k, b = i + k + len / 2;
                const double xr = re[b] * cr - im[b] * ci;
                const double xi = re[b] * ci + im[b] * cr;
                re[b] = re[a] - xr;
                im[b] = im[a] - xi;
                re[a] += xr;
                im[a] += xi;
                const double ncr = cr * wr - ci * wi;
                ci = cr * wi + ci * wr;
                cr = ncr;
            }
        }
    }
    if (inverse) {
        for (std::size_t i = 0; i < n; ++i) {
            re[i] /= static_cast<double>(n);
            im[i] /= static_cast<double>(n);
        }
    }
}

inline std::size_t next_pow2(std::size_t x) {
    std::size_t p = 1;
    while (p < x) p <<= 1;
    return p;
}

} // namespace detail

/// Exact autocovariance of unit-variance fractional Gaussian noise.
inline double fgn_autocovariance(double hurst, int lag) {
    const double k = static_cast<double>(std::abs(lag));
    return 0.5 * (std::pow(k + 1.0, 2.0 * hurst) - 2.0 * std::pow(k, 2.0 * hurst) +
                  std::pow(std::fabs(k - 1.0), 2.0 * hurst));
}

/// Exact fGn sampler by circulant embedding. The covariance is embedded in a
/// power-of-two circulant built from true autocovariances; its spectrum is
/// strictly positive for every H in (0, 1) at these sizes, making the sampled
/// covariance exact up to FFT rounding. The spectrum is factored once per
/// (H, n) and shared across replicates.
class FgnSampler {
public:
    FgnSampler(double hurst, int n) : hurst_(hurst), n_(n) {
        if (!(hurst > 0.0) || !(hurst < 1.0))
            throw std::invalid_argument("FgnSampler: H must lie in (0, 1)");
        if (n < 1) throw std::invalid_argument("FgnSampler: n must be >= 1");
        m_ = detail::next_pow2(static_cast<std::size_t>(std::max(2 * (n - 1), 2)));
        std::vector<double> re(m_), im(m_, 0.0);
        for (std::size_t j = 0; j <= m_ / 2; ++j)
            re[j] = fgn_autocovariance(hurst, static_cast<int>(j));
        for (std::size_t j = m_ / 2 + 1; j < m_; ++j)
            re[j] = re[m_ - j];
        detail::fft_pow2(re, im, false);
        scaled_sqrt_spectrum_.resize(m_);
        for (std::size_t j = 0; j < m_; ++j) {
            double lam = re[j];
            if (lam < -1e-9 * static_cast<double>(m_))
                throw std::runtime_error("FgnSampler: embedding spectrum is not nonnegative");
            if (lam < 0.0) lam = 0.0;
            // complex-gaussian synthesis: Re(F [sqrt(lam/m) (U+iV)]) has
            // covariance exactly c at every lag
            scaled_sqrt_spectrum_[j] = std::sqrt(lam / static_cast<double>(m_));
        }
    }

    double hurst() const { return hurst_; }
    int n() const { return n_; }
    std::size_t embedding_size() const { return m_; }

    /// The covariance the sampler realizes at a given lag (the inverse
    /// transform of the embedding spectrum); equals fgn_autocovariance up to
    /// FFT rounding.
    double implied_covariance(int lag) const {
        std::vector<double> re(m_), im(m_, 0.0);
        for (std::size_t j = 0; j < m_; ++j)
            re[j] = static_cast<double>(m_) * scaled_sqrt_spectrum_[j] *
                    scaled_sqrt_spectrum_[j];
        detail::fft_pow2(re, im, true);
        return re[static_cast<std::size_t>(std::abs(lag)) % m_];
    }

    /// Draws one series of length n. Consumes exactly 2m gaussians.
    Series sample(RandomStream& stream) const {
        std::vector<double> re(m_), im(m_);
        for (std::size_t j = 0; j < m_; ++j) {
            re[j] = scaled_sqrt_spectrum_[j] * stream.next_gaussian();
            im[j] = scaled_sqrt_spectrum_[j] * stream.next_gaussian();
        }
        detail::fft_pow2(re, im, false);
        return Series(re.begin(), re.begin() + n_);
    }

private:
    double hurst_;
    int n_;
    std::size_t m_;
    std::vector<double> scaled_sqrt_spectrum_;
};

namespace detail {

// Shared spectrum cache keyed by (H, n); read-mostly after warmup.
inline const FgnSampler& fgn_sampler_for(double hurst, int n) {
    static std::mutex mu;
    static std::map<std::pair<double, int>, std::unique_ptr<FgnSampler>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{hurst, n}];
    if (!slot) slot = std::make_unique<FgnSampler>(hurst, n);
    return *slot;
}

} // namespace detail

/// Stationary unit-variance fGn with Hurst parameter H.
inline Series sample_fgn(double hurst, int n, RandomStream& stream) {
    return detail::fgn_sampler_for(hurst, n).sample(stream);
}

// ---------------------------------------------------------------------------
// Subordination and the heavy-tail / long-memory product model
// ---------------------------------------------------------------------------

enum class HermiteId {
    identity,  // h(x) = x, rank 1
    hermite2,  // h(x) = x^2 - 1, rank 2
};

inline Series subordinate(const Series& gaussian_series, HermiteId h) {
    Series out;
    out.reserve(gaussian_series.size());
    switch (h) {
        case HermiteId::identity:
            return gaussian_series;
        case HermiteId::hermite2:
            for (double x : gaussian_series) out.push_back(x * x - 1.0);
            return out;
    }
    throw std::invalid_argument("subordinate: unknown function id");
}

enum class ProductEpsFamily { stable, pareto };

/// X_t = sqrt(eps_t) * G_t with eps_t positive i.i.d. of tail index alpha/2
/// and G_t Gaussian: fGn with H = (1+zeta)/2 when zeta > 0 (lag sums of R
/// grow like n^zeta), i.i.d. standard normal when zeta = 0.
inline Series sample_product_lm(double alpha, double zeta, int n, RandomStream& stream,
                                ProductEpsFamily eps_family = ProductEpsFamily::stable) {
    if (!(alpha > 0.0) || !(alpha < 2.0))
        throw std::invalid_argument("sample_product_lm: alpha must lie in (0, 2)");
    if (zeta < 0.0 || zeta >= 1.0)
        throw std::invalid_argument("sample_product_lm: zeta must lie in [0, 1)");

    Series eps(static_cast<std::size_t>(n));
    for (auto& e : eps)
        e = (eps_family == ProductEpsFamily::stable)
                ? sample_stable(alpha / 2.0, 1.0, stream)
                : sample_innovation(InnovationSpec::pareto(alpha / 2.0, 1.0), stream);

    Series g;
    if (zeta == 0.0) {
        g.resize(static_cast<std::size_t>(n));
        for (auto& x : g) x = stream.next_gaussian();
    } else {
        g = sample_fgn((1.0 + zeta) / 2.0, n, stream);
    }

    Series out(static_cast<std::size_t>(n));
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = std::sqrt(eps[t]) * g[t];
    return out;
}

// ---------------------------------------------------------------------------
// Model dispatch
// ---------------------------------------------------------------------------

struct DependenceSpec {
    enum class Kind { iid, ar1, fir, gaussian_lm, subordinated, product_lm };

    Kind kind = Kind::iid;
    double rho = 0.0;                  // ar1
    std::vector<double> fir_coeffs;    // fir
    double hurst = 0.5;                // gaussian_lm / subordinated
    HermiteId hermite = HermiteId::identity;  // subordinated
    double alpha = 1.5;                // product_lm
    double zeta = 0.0;                 // product_lm

    static DependenceSpec iid() { return {}; }
    static DependenceSpec ar1(double rho) {
        DependenceSpec d;
        d.kind = Kind::ar1;
        d.rho = rho;
        return d;
    }
    static DependenceSpec fir(std::vector<double> coeffs) {
        DependenceSpec d;
        d.kind = Kind::fir;
        d.fir_coeffs = std::move(coeffs);
        return d;
    }
    static DependenceSpec gaussian_lm(double hurst) {
        DependenceSpec d;
        d.kind = Kind::gaussian_lm;
        d.hurst = hurst;
        return d;
    }
    static DependenceSpec subordinated(HermiteId h, double hurst) {
        DependenceSpec d = gaussian_lm(hurst);
        d.kind = Kind::subordinated;
        d.hermite = h;
        return d;
    }
    static DependenceSpec product_lm(double alpha, double zeta) {
        DependenceSpec d;
        d.kind = Kind::product_lm;
        d.alpha = alpha;
        d.zeta = zeta;
        return d;
    }

    std::string id() const {
        switch (kind) {
            case Kind::iid: return "iid";
            case Kind::ar1: return "ar1(" + std::to_string(rho) + ")";
            case Kind::fir: return "fir[" + std::to_string(fir_coeffs.size()) + "]";
            case Kind::gaussian_lm: return "gaussian-lm(H=" + std::to_string(hurst) + ")";
            case Kind::subordinated:
                return std::string("subordinated(") +
                       (hermite == HermiteId::identity ? "identity" : "hermite2") +
                       ",H=" + std::to_string(hurst) + ")";
            case Kind::product_lm:
                return "product-lm(alpha=" + std::to_string(alpha) +
                       ",zeta=" + std::to_string(zeta) + ")";
        }
        return "?";
    }
};

struct ModelSpec {
    InnovationSpec innovation;
    DependenceSpec dependence;
    int n = 1000;
    int burn_in = 1000;  // used by ar1 only; heavy-tailed AR(1) has no directly
                         // sampleable stationary start

    std::string id() const {
        return dependence.id() + "/" + innovation.id() + "/n=" + std::to_string(n);
    }
};

/// Generates one series. Per value the draw counts are fixed per family, and
/// each replicate runs on its own derived stream, so parallel replicates
/// never share state.
inline Series generate(const ModelSpec& model, RandomStream& stream) {
    if (model.n < 1) throw std::invalid_argument("generate: n must be >= 1");
    const std::size_t n = static_cast<std::size_t>(model.n);
    switch (model.dependence.kind) {
        case DependenceSpec::Kind::iid: {
            Series out(n);
            for (auto& x : out) x = sample_innovation(model.innovation, stream);
            return out;
        }
        case DependenceSpec::Kind::ar1: {
            Series z(n + static_cast<std::size_t>(model.burn_in));
            for (auto& x : z) x = sample_innovation(model.innovation, stream);
            return ar1_filter(z, model.dependence.rho, model.burn_in);
        }
        case DependenceSpec::Kind::fir: {
            Series z(n + model.dependence.fir_coeffs.size() - 1);
            for (auto& x : z) x = sample_innovation(model.innovation, stream);
            return fir_filter(z, model.dependence.fir_coeffs);
        }
        case DependenceSpec::Kind::gaussian_lm:
            return sample_fgn(model.dependence.hurst, model.n, stream);
        case DependenceSpec::Kind::subordinated:
            return subordinate(sample_fgn(model.dependence.hurst, model.n, stream),
                               model.dependence.hermite);
        case DependenceSpec::Kind::product_lm:
            return sample_product_lm(model.dependence.alpha, model.dependence.zeta,
                                     model.n, stream);
    }
    throw std::logic_error("generate: unknown dependence kind");
}

} // namespace scanrate

#include "qfc/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qfc/bessel.hpp"
#include "qfc/errors.hpp"

namespace qfc {

namespace {

constexpr int kFactors = 40;
constexpr int kTableNodes = 16385;  // on [-1, 1]

double sinc(double u) {
    if (std::abs(u) < 1e-8) return 1.0 - u * u / 6.0;
    return std::sin(u) / u;
}

// Gauss-Legendre nodes/weights on [-1, 1].
struct GaussRule {
    std::vector<double> x, w;
};

GaussRule gauss_legendre(int n) {
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton from the Chebyshev initial guess.
        double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        r.x[i] = t;
        r.w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return r;
}

}  // namespace

const KernelTable& KernelTable::instance() {
    static KernelTable table;
    return table;
}

KernelTable::KernelTable() {
    a_.resize(kFactors);
    double inv_sq_sum = 0.0;
    for (int j = 1; j <= kFactors; ++j) inv_sq_sum += 1.0 / (static_cast<double>(j) * j);
    const double c0 = 1.0 / inv_sq_sum;
    for (int j = 1; j <= kFactors; ++j) a_[j - 1] = c0 / (static_cast<double>(j) * j);

    const int n = kTableNodes;
    h_ = 2.0 / (n - 1);
    values_.assign(n, 0.0);
    auto node = [&](int i) { return -1.0 + h_ * i; };

    // Seed with the exact trapezoid box(a1) * box(a2), then fold in the
    // remaining boxes by exact integration of the piecewise-linear table.
    const double a1 = a_[0], a2 = a_[1];
    for (int i = 0; i < n; ++i) {
        const double x = std::abs(node(i));
        const double len = std::min(a1 + a2 - x, 2.0 * std::min(a1, a2));
        values_[i] = std::max(0.0, len) / (4.0 * a1 * a2);
    }

    std::vector<double> cum(n, 0.0), next(n, 0.0);
    auto rebuild_cum = [&]() {
        cum[0] = 0.0;
        for (int i = 1; i < n; ++i)
            cum[i] = cum[i - 1] + 0.5 * h_ * (values_[i - 1] + values_[i]);
    };
    auto eval_cum = [&](double x) {
        if (x <= -1.0) return 0.0;
        if (x >= 1.0) return cum[n - 1];
        const double t = (x + 1.0) / h_;
        const int i = std::min(static_cast<int>(t), n - 2);
        const double dx = (t - i) * h_;
        const double slope = (values_[i + 1] - values_[i]) / h_;
        return cum[i] + dx * values_[i] + 0.5 * dx * dx * slope;
    };

    for (int j = 2; j < kFactors; ++j) {
        rebuild_cum();
        const double aj = a_[j];
        for (int i = 0; i < n; ++i)
            next[i] = (eval_cum(node(i) + aj) - eval_cum(node(i) - aj)) / (2.0 * aj);
        values_.swap(next);
    }
    rebuild_cum();
    const double mass = cum[n - 1];
    for (auto& v : values_) v /= mass;
    rebuild_cum();
    cum_ = cum;
}

double KernelTable::density(double x) const {
    if (std::abs(x) >= 1.0) return 0.0;
    const double t = (x + 1.0) / h_;
    const int i = std::min(static_cast<int>(t), kTableNodes - 2);
    const double frac = t - i;
    return values_[i] * (1.0 - frac) + values_[i + 1] * frac;
}

double KernelTable::cdf(double x) const {
    if (x <= -1.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double t = (x + 1.0) / h_;
    const int i = std::min(static_cast<int>(t), kTableNodes - 2);
    const double dx = (t - i) * h_;
    const double slope = (values_[i + 1] - values_[i]) / h_;
    return cum_[i] + dx * values_[i] + 0.5 * dx * dx * slope;
}

double KernelTable::khat1(double xi) const {
    double p = 1.0;
    for (double a : a_) p *= sinc(a * xi);
    return p;
}

double Kernel::axis_scale() const { return tau / std::sqrt(static_cast<double>(dim)); }

double Kernel::density1(double x) const {
    const double s = axis_scale();
    return KernelTable::instance().density(x / s) / s;
}

double Kernel::cdf1(double x) const { return KernelTable::instance().cdf(x / axis_scale()); }

double Kernel::khat(const std::vector<double>& v) const {
    const double s = axis_scale();
    double p = 1.0;
    for (double x : v) p *= KernelTable::instance().khat1(s * x);
    return p;
}

Kernel build_ingham_kernel(int dim, double tau) {
    if (dim < 1 || tau <= 0.0) throw DomainError("build_ingham_kernel: dim >= 1, tau > 0");
    const KernelTable& table = KernelTable::instance();
    Kernel k;
    k.dim = dim;
    k.tau = tau;

    // Certify the decay constant on the radial log grid ||v|| in [1, 1e4]
    // along the axis direction (the slowest-decaying one for the product).
    const int grid = 400;
    double c_cert = std::numeric_limits<double>::infinity();
    const double s = k.axis_scale();
    for (int i = 0; i < grid; ++i) {
        const double r = std::pow(10.0, 4.0 * i / (grid - 1));
        const double m = std::abs(table.khat1(s * r));
        if (m <= 0.0) continue;
        c_cert = std::min(c_cert, -std::log(m) / std::sqrt(tau * r));
    }

    // Least-squares diagnostic on the envelope (local maxima of |khat1|)
    // of the base factor over xi in [1, 1e4].
    const int fg = 2000;
    std::vector<double> xs, ys;
    std::vector<double> mags(fg);
    for (int i = 0; i < fg; ++i) {
        const double xi = std::pow(10.0, 4.0 * i / (fg - 1));
        mags[i] = std::abs(table.khat1(xi));
    }
    for (int i = 1; i + 1 < fg; ++i) {
        if (mags[i] > mags[i - 1] && mags[i] >= mags[i + 1] && mags[i] > 0.0) {
            const double xi = std::pow(10.0, 4.0 * i / (fg - 1));
            xs.push_back(std::sqrt(xi));
            ys.push_back(-std::log(mags[i]));
        }
    }
    double slope = 0.0, intercept = 0.0, r2 = 0.0;
    if (xs.size() >= 3) {
        const double nn = static_cast<double>(xs.size());
        const double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
        const double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sxx += xs[i] * xs[i];
            sxy += xs[i] * ys[i];
            syy += ys[i] * ys[i];
        }
        slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
        intercept = (sy - slope * sx) / nn;
        double ss_res = 0.0, ss_tot = 0.0;
        const double ybar = sy / nn;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            const double fit = slope * xs[i] + intercept;
            ss_res += (ys[i] - fit) * (ys[i] - fit);
            ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
        }
        r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
    }

    k.decay_c = c_cert;
    k.ls_slope = slope;
    k.r_squared = r2;
    return k;
}

SandwichRegion SandwichRegion::ball(int dim) {
    SandwichRegion r;
    r.kind = Kind::Ball;
    r.dim = dim;
    return r;
}

SandwichRegion SandwichRegion::box(std::vector<Interval> intervals) {
    SandwichRegion r;
    r.kind = Kind::Box;
    r.dim = static_cast<int>(intervals.size());
    r.intervals = std::move(intervals);
    return r;
}

namespace {

/// w = (1_{B(radius)} * k_tau^dim)(v) for dim <= 3, evaluated with the last
/// axis integrated exactly through the kernel CDF and Gauss-Legendre on the
/// others, self-normalized so saturated points give exactly 0 or 1.
class BallConvolution {
public:
    BallConvolution(const Kernel& k, double radius, int gl_nodes = 32)
        : k_(k), radius_(radius), rule_(gauss_legendre(gl_nodes)) {}

    double operator()(const std::vector<double>& v) const {
        const int dim = static_cast<int>(v.size());
        const double s = k_.axis_scale();
        const double r2 = radius_ * radius_;
        const auto& table = KernelTable::instance();
        double num = 0.0, den = 0.0;
        if (dim == 1) {
            return k_.cdf1(v[0] + radius_) - k_.cdf1(v[0] - radius_);
        } else if (dim == 2) {
            for (std::size_t i = 0; i < rule_.x.size(); ++i) {
                const double u1 = s * rule_.x[i];
                const double kw = rule_.w[i] * table.density(rule_.x[i]);
                den += kw;
                const double rem = r2 - (v[0] - u1) * (v[0] - u1);
                if (rem < 0.0) continue;
                const double rho = std::sqrt(rem);
                num += kw * (k_.cdf1(v[1] + rho) - k_.cdf1(v[1] - rho));
            }
        } else {
            for (std::size_t i = 0; i < rule_.x.size(); ++i) {
                const double u1 = s * rule_.x[i];
                const double kwi = rule_.w[i] * table.density(rule_.x[i]);
                const double rem1 = r2 - (v[0] - u1) * (v[0] - u1);
                for (std::size_t j = 0; j < rule_.x.size(); ++j) {
                    const double u2 = s * rule_.x[j];
                    const double kw = kwi * rule_.w[j] * table.density(rule_.x[j]);
                    den += kw;
                    if (rem1 < 0.0) continue;
                    const double rem = rem1 - (v[1] - u2) * (v[1] - u2);
                    if (rem < 0.0) continue;
                    const double rho = std::sqrt(rem);
                    num += kw * (k_.cdf1(v[2] + rho) - k_.cdf1(v[2] - rho));
                }
            }
        }
        return den > 0.0 ? num / den : 0.0;
    }

private:
    const Kernel& k_;
    double radius_;
    GaussRule rule_;
};

}  // namespace

SandwichReport sandwich_check(const SandwichRegion& region, double tau, int grid_points) {
    if (!(tau > 0.0 && tau < 0.5)) throw DomainError("sandwich_check: tau in (0, 1/2)");

    SandwichReport rep;
    rep.max_violation = 0.0;
    rep.grid_points = 0;
    std::vector<double> worst;

    auto consider = [&](double viol, const std::vector<double>& pt) {
        if (viol > rep.max_violation) {
            rep.max_violation = viol;
            worst = pt;
        }
    };

    if (region.kind == SandwichRegion::Kind::Ball) {
        const int dim = region.dim;
        if (dim < 1 || dim > 3)
            throw DomainError("sandwich_check: ball region supported for dim <= 3");
        Kernel k = build_ingham_kernel(dim, tau);
        BallConvolution w_minus(k, 1.0 - tau), w_plus(k, 1.0 + tau);

        // radii concentrated in the boundary shell, always including the
        // binding offsets {0, tau/2, tau, 2 tau} on both sides
        std::vector<double> offsets = {0.0,        tau / 2,  -tau / 2, tau,     -tau,
                                       2 * tau,    -2 * tau, 3 * tau,  -3 * tau};
        const int fill = 32;
        for (int i = 0; i < fill; ++i) offsets.push_back((-3.0 + 6.0 * i / (fill - 1)) * tau);
        std::sort(offsets.begin(), offsets.end());
        offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

        const int n_dirs = std::max(8, grid_points / static_cast<int>(offsets.size()));
        for (int di = 0; di < n_dirs; ++di) {
            std::vector<double> dir(dim, 0.0);
            if (dim == 1) {
                dir[0] = di % 2 == 0 ? 1.0 : -1.0;
            } else if (dim == 2) {
                const double a = 2.0 * M_PI * di / n_dirs;
                dir = {std::cos(a), std::sin(a)};
            } else {
                // Fibonacci sphere
                const double ga = M_PI * (3.0 - std::sqrt(5.0));
                const double z = 1.0 - 2.0 * (di + 0.5) / n_dirs;
                const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
                dir = {rr * std::cos(ga * di), rr * std::sin(ga * di), z};
            }
            for (double off : offsets) {
                const double r = 1.0 + off;
                if (r < 0.0) continue;
                std::vector<double> pt(dim);
                for (int a = 0; a < dim; ++a) pt[a] = r * dir[a];
                const double f = r <= 1.0 ? 1.0 : 0.0;
                const double fm2 = r <= 1.0 - 2.0 * tau ? 1.0 : 0.0;
                const double fp2 = r <= 1.0 + 2.0 * tau ? 1.0 : 0.0;
                const double wm = w_minus(pt), wp = w_plus(pt);
                consider(fm2 - wm, pt);
                consider(wm - f, pt);
                consider(f - wp, pt);
                consider(wp - fp2, pt);
                ++rep.grid_points;
            }
            if (rep.grid_points >= grid_points) break;
        }
    } else {
        const auto& box = region.intervals;
        Kernel k = build_ingham_kernel(1, tau);  // per-axis factors at scale eps
        (void)k;
        const auto& table = KernelTable::instance();
        auto axis_conv = [&](double x, double lo, double hi) {
            // (1_{[lo,hi]} * k_eps)(x), exact via the CDF
            return table.cdf((x - lo) / tau) - table.cdf((x - hi) / tau);
        };
        const double eps = tau;
        const int naxes = static_cast<int>(box.size());

        std::vector<double> offsets = {0.0,     eps / 2,  -eps / 2, eps,      -eps,
                                       2 * eps, -2 * eps, 3 * eps,  -3 * eps, 0.31 * eps};
        std::vector<std::vector<double>> axis_points(naxes);
        for (int a = 0; a < naxes; ++a) {
            for (double o : offsets) {
                axis_points[a].push_back(box[a].a + o);
                axis_points[a].push_back(box[a].b + o);
            }
            axis_points[a].push_back(0.5 * (box[a].a + box[a].b));
        }
        std::vector<std::size_t> idx(naxes, 0);
        for (;;) {
            std::vector<double> pt(naxes);
            for (int a = 0; a < naxes; ++a) pt[a] = axis_points[a][idx[a]];
            double f = 1.0, fm2 = 1.0, fp2 = 1.0, wm = 1.0, wp = 1.0;
            for (int a = 0; a < naxes; ++a) {
                const double x = pt[a];
                f = std::min(f, box[a].contains(x) ? 1.0 : 0.0);
                fm2 = std::min(fm2, (box[a].a + 2 * eps <= x && x <= box[a].b - 2 * eps) ? 1.0 : 0.0);
                fp2 = std::min(fp2, (box[a].a - 2 * eps <= x && x <= box[a].b + 2 * eps) ? 1.0 : 0.0);
                wm *= axis_conv(x, box[a].a + eps, box[a].b - eps);
                wp *= axis_conv(x, box[a].a - eps, box[a].b + eps);
            }
            consider(fm2 - wm, pt);
            consider(wm - f, pt);
            consider(f - wp, pt);
            consider(wp - fp2, pt);
            ++rep.grid_points;
            int a = naxes - 1;
            while (a >= 0 && ++idx[a] >= axis_points[a].size()) idx[a--] = 0;
            if (a < 0) break;
            if (rep.grid_points >= grid_points) break;
        }
    }

    rep.witness = worst;
    rep.passed = rep.max_violation <= 1e-9;
    if (!rep.passed) {
        std::string msg = "sandwich violation " + std::to_string(rep.max_violation) + " at (";
        for (double x : worst) msg += std::to_string(x) + ",";
        msg += ")";
        throw ViolationFound(msg);
    }
    return rep;
}

FourierBoundReport s_eps_fourier_bound(double eps, const std::vector<Interval>& intervals,
                                       int grid_points) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("s_eps_fourier_bound: eps in (0,1)");
    const auto& table = KernelTable::instance();
    const int m = static_cast<int>(intervals.size());

    // certified 1-D decay constant on the same grid style as the kernel build
    Kernel k1 = build_ingham_kernel(1, 1.0);
    const double c = k1.decay_c;

    auto shat_abs_axis = [&](int axis, double xi) {
        // |S_eps| along a single axis (other coordinates zero)
        double p = 1.0;
        for (int i = 0; i < m; ++i) {
            const double L = intervals[i].length() + 2.0 * eps;
            const double w = i == axis ? xi : 0.0;
            const double ind = w == 0.0 ? L : std::abs(2.0 * std::sin(0.5 * w * L) / w);
            p *= ind * std::abs(table.khat1(eps * w));
        }
        return p;
    };
    auto bound_axis = [&](int axis, double xi) {
        double p = 1.0;
        for (int i = 0; i < m; ++i) {
            const double w = i == axis ? xi : 0.0;
            const double mn = std::min(1.0, w == 0.0 ? 1.0 : 1.0 / std::abs(w));
            p *= mn * std::exp(-c * std::sqrt(eps * std::abs(w)));
        }
        return p;
    };

    double C = 0.0;
    for (int axis = 0; axis < m; ++axis) {
        for (int i = 0; i < grid_points; ++i) {
            const double xi = std::pow(10.0, -1.0 + 5.0 * i / (grid_points - 1));
            C = std::max(C, shat_abs_axis(axis, xi) / bound_axis(axis, xi));
        }
    }
    // diagonal ray as well
    for (int i = 0; i < grid_points; ++i) {
        const double xi = std::pow(10.0, -1.0 + 5.0 * i / (grid_points - 1));
        double num = 1.0, den = 1.0;
        for (int a = 0; a < m; ++a) {
            const double L = intervals[a].length() + 2.0 * eps;
            num *= std::abs(2.0 * std::sin(0.5 * xi * L) / xi) * std::abs(table.khat1(eps * xi));
            den *= std::min(1.0, 1.0 / xi) * std::exp(-c * std::sqrt(eps * xi));
        }
        C = std::max(C, num / den);
    }

    FourierBoundReport rep;
    rep.c_constant = C;
    rep.fitted_decay = c;
    double s0 = 1.0;
    for (const auto& iv : intervals) s0 *= iv.length() + 2.0 * eps;
    rep.s_at_zero = s0;
    return rep;
}

double w_hat_l1_norm(double tau, int nd, double decay_c) {
    if (!(tau > 0.0 && tau < 1.0)) throw DomainError("w_hat_l1_norm: tau in (0,1)");
    if (nd < 5 || nd > 30) throw DomainError("w_hat_l1_norm: nd in [5, 30]");
    if (!(decay_c > 0.0)) throw DomainError("w_hat_l1_norm: decay_c > 0");

    const double R = 1.0 + tau;
    const double nu = 0.5 * nd;
    const double surf = 2.0 * std::pow(M_PI, 0.5 * nd) / std::tgamma(0.5 * nd);

    auto integrand = [&](double rho) {
        if (rho <= 0.0) return 0.0;
        const double arg = 2.0 * M_PI * R * rho;
        const double j = bessel_j(nu, arg);
        // rho^{nd-1} * (R/rho)^{nd/2} |J| * exp(-c sqrt(tau rho))
        return std::pow(rho, nd - 1.0) * std::pow(R / rho, nu) * std::abs(j) *
               std::exp(-decay_c * std::sqrt(tau * rho));
    };

    // March over zero-free segments of J(2 pi R rho); GL-10 on each.
    static const GaussRule rule = gauss_legendre(10);
    auto segment = [&](double lo, double hi) {
        double sum = 0.0;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t i = 0; i < rule.x.size(); ++i)
            sum += rule.w[i] * integrand(mid + half * rule.x[i]);
        return sum * half;
    };

    // Exact |J| integration up to the bessel_j domain cap; beyond it the
    // oscillation is replaced by its mean envelope sqrt(2/(pi x)) * 2/pi,
    // which only affects the exponentially damped tail.
    const double rho_exact = std::min((40.0 / decay_c) * (40.0 / decay_c) / tau,
                                      0.999e6 / (2.0 * M_PI * R));
    const double step = 1.0 / (8.0 * R);
    double total = 0.0;
    double seg_start = 0.0;
    double prev_rho = 1e-12, prev_j = bessel_j(nu, 2.0 * M_PI * R * prev_rho);
    long long evals = 0;
    for (double rho = step;; rho += step) {
        const bool last = rho >= rho_exact || decay_c * std::sqrt(tau * rho) > 40.0;
        const double here = last ? std::min(rho, rho_exact) : rho;
        double j = bessel_j(nu, 2.0 * M_PI * R * here);
        if (++evals > 50000000) throw QuadratureFailure("w_hat_l1_norm: refinement budget exceeded");
        if ((j > 0) != (prev_j > 0) && prev_j != 0.0) {
            double a = prev_rho, b = here;
            for (int it = 0; it < 40; ++it) {
                const double m = 0.5 * (a + b);
                if ((bessel_j(nu, 2.0 * M_PI * R * m) > 0) == (prev_j > 0))
                    a = m;
                else
                    b = m;
            }
            const double zero = 0.5 * (a + b);
            total += segment(seg_start, zero);
            seg_start = zero;
        }
        prev_rho = here;
        prev_j = j;
        if (last) {
            total += segment(seg_start, here);
            seg_start = here;
            break;
        }
        if (rho - seg_start > 0.5 / R) {
            total += segment(seg_start, rho);
            seg_start = rho;
        }
    }
    // envelope tail
    if (decay_c * std::sqrt(tau * seg_start) < 40.0) {
        auto env = [&](double rho) {
            const double x = 2.0 * M_PI * R * rho;
            return std::pow(rho, nd - 1.0) * std::pow(R / rho, nu) *
                   std::sqrt(2.0 / (M_PI * x)) * (2.0 / M_PI) *
                   std::exp(-decay_c * std::sqrt(tau * rho));
        };
        const double rho_end = (42.0 / decay_c) * (42.0 / decay_c) / tau;
        const int panels = 400;
        for (int i = 0; i < panels; ++i) {
            const double a = seg_start + (rho_end - seg_start) * i / panels;
            const double b = seg_start + (rho_end - seg_start) * (i + 1) / panels;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            double sum = 0.0;
            for (std::size_t k = 0; k < rule.x.size(); ++k)
                sum += rule.w[k] * env(mid + half * rule.x[k]);
            total += sum * half;
        }
    }
    return surf * total;
}

}  // namespace qfc

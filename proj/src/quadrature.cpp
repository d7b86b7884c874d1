#include "ppcp/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>

namespace ppcp {

namespace {

// Kronrod abscissae on [-1, 1], descending; odd indices are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a;
    double b;
    double value;
    double error;
    int depth;

    bool operator<(const Panel& other) const { return error < other.error; }
};

double checked(const Integrand& f, double x) {
    const double y = f(x);
    if (std::isnan(y)) {
        throw QuadratureNaN(x);
    }
    return y;
}

Panel gauss_kronrod(const Integrand& f, double a, double b, int depth) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = checked(f, center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double pair = checked(f, center - dx) + checked(f, center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * pair;
        }
    }
    return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half), depth};
}

double target(const QuadPolicy& policy, double value) {
    return std::max(policy.abs_tol, policy.rel_tol * std::abs(value));
}

}  // namespace

void QuadPolicy::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
        throw std::invalid_argument("quadrature tolerances must be positive");
    }
    if (!(trunc_factor >= 4.0)) {
        throw std::invalid_argument("trunc_factor must be >= 4");
    }
    if (max_depth < 1) {
        throw std::invalid_argument("max_depth must be >= 1");
    }
}

QuadPolicy QuadPolicy::inner(double tighten) const {
    QuadPolicy p = *this;
    p.rel_tol = std::max(rel_tol * tighten, 1e-13);
    p.abs_tol = std::max(abs_tol * tighten, 1e-15);
    return p;
}

QuadResult& QuadResult::operator+=(const QuadResult& other) {
    value += other.value;
    abs_err_est += other.abs_err_est;
    evaluations += other.evaluations;
    converged = converged && other.converged;
    return *this;
}

QuadratureNaN::QuadratureNaN(double abscissa)
    : std::domain_error("integrand returned NaN at x = " + std::to_string(abscissa)),
      abscissa_(abscissa) {}

QuadResult integrate(const Integrand& f, double a, double b, std::span<const double> breaks,
                     const QuadPolicy& policy) {
    if (!(a < b)) {
        throw std::invalid_argument("integrate: require a < b");
    }
    std::vector<double> nodes{a};
    for (double x : breaks) {
        if (x > a && x < b) {
            nodes.push_back(x);
        }
    }
    nodes.push_back(b);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    std::priority_queue<Panel> queue;
    QuadResult result;
    double total = 0.0;
    double error = 0.0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        const Panel p = gauss_kronrod(f, nodes[i], nodes[i + 1], 0);
        result.evaluations += 15;
        total += p.value;
        error += p.error;
        queue.push(p);
    }

    while (error > target(policy, total)) {
        const Panel worst = queue.top();
        if (worst.depth >= policy.max_depth) {
            result.converged = false;
            break;
        }
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = gauss_kronrod(f, worst.a, mid, worst.depth + 1);
        const Panel right = gauss_kronrod(f, mid, worst.b, worst.depth + 1);
        result.evaluations += 30;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }

    // Re-sum to shed the drift of the incremental updates.
    total = 0.0;
    error = 0.0;
    while (!queue.empty()) {
        total += queue.top().value;
        error += queue.top().error;
        queue.pop();
    }
    result.value = total;
    result.abs_err_est = error;
    return result;
}

QuadResult integrate(const Integrand& f, double a, double b, const QuadPolicy& policy) {
    return integrate(f, a, b, std::span<const double>{}, policy);
}

QuadResult integrate_semi_infinite(const Integrand& f, double a, double scale,
                                   const QuadPolicy& policy, Tail tail) {
    if (!(scale > 0.0)) {
        throw std::invalid_argument("integrate_semi_infinite: scale must be positive");
    }
    if (tail == Tail::rapid) {
        const Integrand mapped = [&](double t) {
            const double one_minus = 1.0 - t;
            const double s = a + scale * t / one_minus;
            if (!std::isfinite(s)) {
                return 0.0;
            }
            const double y = f(s);
            return y == 0.0 ? 0.0 : y * scale / (one_minus * one_minus);
        };
        return integrate(mapped, 0.0, 1.0, policy);
    }
    // The exponential stage turns algebraic tails into exponential ones in x,
    // so no mass hides in the last few ulps below t = 1.
    const Integrand mapped = [&](double t) {
        const double one_minus = 1.0 - t;
        const double x = t / one_minus;
        const double grow = std::exp(x);
        const double s = a + scale * std::expm1(x);
        if (!std::isfinite(s) || !std::isfinite(grow)) {
            return 0.0;
        }
        const double y = f(s);
        return y == 0.0 ? 0.0 : y * scale * grow / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, policy);
}

}  // namespace ppcp

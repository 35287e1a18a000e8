#include "gmopg/quadrature.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace gmopg {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate_segment(const std::function<double(double)>& f, double a,
                         double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kKronrodNodes[i]);
        fv[14 - i] = f(c + h * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kronrod = kKronrodWeights[7] * fv[7];
    double gauss = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        kronrod += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1)
            gauss += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
    }
    kronrod *= h;
    gauss *= h;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opts) {
    QuadratureResult res;
    if (!(b > a)) {
        res.converged = true;
        return res;
    }
    std::priority_queue<Segment> heap;
    heap.push(evaluate_segment(f, a, b));
    res.evaluations = 15;
    double total = heap.top().value;
    double total_err = heap.top().error;
    std::size_t n_intervals = 1;
    while (n_intervals < opts.max_intervals) {
        const double tol =
            std::max(opts.abs_tol, opts.rel_tol * std::abs(total));
        if (total_err <= tol) break;
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = evaluate_segment(f, worst.a, mid);
        Segment right = evaluate_segment(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n_intervals;
    }
    res.value = total;
    res.error_estimate = total_err;
    res.converged =
        total_err <= std::max(opts.abs_tol, opts.rel_tol * std::abs(total)) &&
        std::isfinite(total);
    return res;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts) {
    const QuadratureResult r = integrate(f, a, b, opts);
    if (!r.converged)
        throw std::runtime_error(
            "quadrature did not converge: value=" + std::to_string(r.value) +
            " error=" + std::to_string(r.error_estimate) +
            " evaluations=" + std::to_string(r.evaluations));
    return r.value;
}

}  // namespace gmopg

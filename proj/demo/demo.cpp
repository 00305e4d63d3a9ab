// Minimal rule of degree 19 on the square, a cubature sum and an interpolant.
#include <cmath>
#include <cstdio>

#include <mincuba/mincuba.hpp>

int main() {
    using namespace mincuba;
    const JacobiParams cheb{-0.5, -0.5};
    const CubatureRule rule = minimal_rule_square(cheb, -0.5, 5);
    std::printf("square rule: %zu nodes, degree %d\n", rule.size(), rule.degree);

    auto f = [](double x, double y) { return std::exp(x + y); };
    const ReferenceIntegrator oracle(rule.weight);
    std::printf("int exp(x+y): cubature %.15f  reference %.15f\n", apply(rule, f), oracle.integrate(f));

    const Interpolant I = interpolate_square(rule, sample(rule, f));
    for (Point2 p : {Point2{0.3, -0.7}, Point2{0.9, 0.9}, Point2{-0.25, 0.5}})
        std::printf("L f(%5.2f, %5.2f) = %.12f  f = %.12f\n", p.a, p.b, I(p), f(p.a, p.b));

    const LebesgueEstimate L = lebesgue_square(cheb, 5);
    std::printf("Lebesgue constant %.6f at (%.4f, %.4f)\n", L.value, L.argmax.a, L.argmax.b);
    return 0;
}

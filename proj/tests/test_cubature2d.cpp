#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include <mincuba/cubature2d.hpp>

#include "oracles.hpp"

using namespace mincuba;

namespace {

const JacobiParams kParams[] = {{-0.5, -0.5}, {0.0, 0.0}, {0.5, -0.25}};
const DomainTag kDomains[] = {DomainTag::Omega, DomainTag::OmegaStar, DomainTag::Rhombus, DomainTag::Square};

std::size_t expected_count(DomainTag d, bool minus, int n) {
    const std::size_t base = minus ? n * (n + 1) / 2 : n * (n - 1) / 2;
    return (d == DomainTag::Omega || d == DomainTag::OmegaStar) ? base : 4 * base;
}

} // namespace

TEST(GaussRuleOmega, ChebyshevTwoPoint) {
    const CubatureRule r = gauss_rule_omega({-0.5, -0.5}, -0.5, 2);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r.degree, 3);
    const double s2 = std::sqrt(2.0);
    std::map<double, std::pair<double, double>> byu;
    for (std::size_t i = 0; i < 3; ++i) byu[std::round(r.nodes[i].a * 1e12) / 1e12] = {r.nodes[i].b, r.weights[i]};
    ASSERT_EQ(byu.size(), 3u);
    auto it = byu.begin();
    EXPECT_NEAR(it->first, -s2, 1e-12);
    EXPECT_NEAR(it->second.first, 0.5, 1e-15);
    EXPECT_NEAR(it->second.second, 0.25, 1e-15);
    ++it;
    EXPECT_NEAR(it->first, 0.0, 1e-15);
    EXPECT_NEAR(it->second.first, -0.5, 1e-15);
    EXPECT_NEAR(it->second.second, 0.5, 1e-15);
    ++it;
    EXPECT_NEAR(it->first, s2, 1e-12);
    EXPECT_NEAR(it->second.second, 0.25, 1e-15);
}

TEST(GaussRuleStar, ImageOfOmegaRule) {
    for (const auto& p : kParams)
        for (double g : {-0.5, 0.5}) {
            const CubatureRule o = gauss_rule_omega(p, g, 7), s = gauss_rule_star(p, g, 7);
            ASSERT_EQ(o.size(), s.size());
            EXPECT_EQ(o.degree, s.degree);
            for (std::size_t i = 0; i < o.size(); ++i) {
                const Point2 q = affine_to_star(o.nodes[i].a, o.nodes[i].b);
                EXPECT_NEAR(q.a, s.nodes[i].a, 1e-13);
                EXPECT_NEAR(q.b, s.nodes[i].b, 1e-13);
                EXPECT_EQ(o.weights[i], s.weights[i]);
                EXPECT_LE(std::sqrt(s.nodes[i].a) + std::sqrt(s.nodes[i].b), 1.0 + 1e-12);
            }
        }
    const CubatureRule c = gauss_rule_star({-0.5, -0.5}, -0.5, 2);
    const double h = std::sqrt(2.0) / 2;
    EXPECT_NEAR(c.nodes[0].a, (1 + h) * (1 + h) / 4, 1e-15);
    EXPECT_NEAR(c.nodes[0].b, (1 - h) * (1 - h) / 4, 1e-15);
    EXPECT_NEAR(c.nodes[0].a, 0.72855, 1e-5);
    EXPECT_NEAR(c.nodes[0].b, 0.02145, 1e-5);
}

TEST(MinimalRuleSquare, ChebyshevTwoPoint) {
    const CubatureRule r = minimal_rule_square({-0.5, -0.5}, -0.5, 2);
    ASSERT_EQ(r.size(), 12u);
    EXPECT_EQ(r.degree, 7);
    const double h = std::sqrt(2.0) / 2;
    const Point2 reps[3] = {{1, h}, {h, 0}, {1, -h}};
    const double w[3] = {1.0 / 16, 1.0 / 8, 1.0 / 16};
    for (int o = 0; o < 3; ++o) {
        EXPECT_NEAR(r.nodes[4 * o].a, reps[o].a, 1e-15);
        EXPECT_NEAR(r.nodes[4 * o].b, reps[o].b, 1e-15);
        for (int i = 0; i < 4; ++i) EXPECT_NEAR(r.weights[4 * o + i], w[o], 1e-16);
    }
}

TEST(Rules, NodeCountsWeightsAndOrbits) {
    for (DomainTag d : kDomains)
        for (double g : {-0.5, 0.5})
            for (int n = (g < 0 ? 1 : 2); n <= 32; ++n) {
                const CubatureRule r = make_rule(d, {0.5, -0.25}, g, n);
                ASSERT_EQ(r.size(), expected_count(d, g < 0, n)) << to_string(d) << " n=" << n;
                ASSERT_EQ(r.weights.size(), r.size());
                ASSERT_EQ(r.orbit.size(), r.size());
                NeumaierSum s;
                for (std::size_t i = 0; i < r.size(); ++i) {
                    EXPECT_GT(r.weights[i], 0.0);
                    EXPECT_TRUE(contains(d, r.nodes[i]));
                    s.add(r.weights[i]);
                }
                EXPECT_NEAR(s.value(), 1.0, 1e-12);
                if (d == DomainTag::Square) {
                    for (std::size_t i = 0; i < r.size(); i += 4) {
                        const Point2 p = r.nodes[i];
                        const Point2 img[4] = {p, {p.b, p.a}, {-p.a, -p.b}, {-p.b, -p.a}};
                        for (int b = 0; b < 4; ++b) {
                            EXPECT_EQ(r.nodes[i + b], img[b]);
                            EXPECT_EQ(r.weights[i + b], r.weights[i]);
                            EXPECT_EQ(r.orbit[i + b].branch, b + 1);
                        }
                    }
                }
            }
    EXPECT_EQ(minimal_rule_square({-0.5, -0.5}, -0.5, 5).size(), 60u);
    EXPECT_EQ(minimal_rule_square({-0.5, -0.5}, -0.5, 9).size(), 180u);
    EXPECT_EQ(minimal_rule_rhombus({-0.5, -0.5}, -0.5, 5).size(), 60u);
}

TEST(Rules, NodeOrderIsOrbitMajorKThenJ) {
    const CubatureRule r = minimal_rule_square({0, 0}, -0.5, 4);
    for (std::size_t i = 1; i < r.size(); ++i) {
        const OrbitIndex a = r.orbit[i - 1], b = r.orbit[i];
        EXPECT_TRUE(std::tie(a.k, a.j, a.branch) < std::tie(b.k, b.j, b.branch));
    }
}

TEST(Rules, SquareCollapsesToOmega) {
    for (const auto& p : kParams) {
        const CubatureRule sq = minimal_rule_square(p, -0.5, 6);
        const CubatureRule om = gauss_rule_omega(p, -0.5, 6);
        for (std::size_t o = 0; o < om.size(); ++o) {
            double w = 0;
            for (int b = 0; b < 4; ++b) {
                const Point2 q = quad_map(sq.nodes[4 * o + b].a, sq.nodes[4 * o + b].b);
                // (2xy, x^2+y^2-1) is the Omega point (X+Y, XY) of the node pair, X = cos(th_j), Y = cos(th_k)
                EXPECT_NEAR(q.a, om.nodes[o].a, 1e-13);
                EXPECT_NEAR(q.b, om.nodes[o].b, 1e-13);
                w += sq.weights[4 * o + b];
            }
            EXPECT_NEAR(w, om.weights[o], 1e-15);
        }
    }
}

TEST(Rules, ArgumentErrors) {
    EXPECT_THROW(gauss_rule_omega({0, 0}, -0.5, 0), domain_error);
    EXPECT_THROW(gauss_rule_omega({0, 0}, 0.5, 1), domain_error);
    EXPECT_THROW(minimal_rule_square({0, 0}, 0.25, 3), parameter_error);
    EXPECT_THROW(minimal_rule_square({-1, 0}, -0.5, 3), parameter_error);
    EXPECT_THROW(minimal_rule_rhombus({0, -2}, -0.5, 3), parameter_error);
}

TEST(Apply, Examples) {
    const CubatureRule r = minimal_rule_square({-0.5, -0.5}, -0.5, 2);
    EXPECT_NEAR(apply(r, [](double, double) { return 1.0; }), 1.0, 1e-15);
    EXPECT_NEAR(apply(r, [](double x, double y) { return x * x + y * y; }), 1.0, 1e-15);
    const CubatureRule q = minimal_rule_square({0.5, -0.25}, -0.5, 5);
    EXPECT_NEAR(apply(q, [](double x, double y) { return x * x * x + x * y * y + std::sin(x - y); }), 0.0, 1e-14);
    try {
        apply(r, [](double x, double) { return x > 0.99 ? std::nan("") : 1.0; });
        FAIL() << "expected evaluation_error";
    } catch (const evaluation_error& e) {
        EXPECT_EQ(e.index, 0u);
    }
}

TEST(Exactness, OmegaRulesAgainstClosedFormMoments) {
    for (const auto& p : kParams)
        for (double g : {-0.5, 0.5}) {
            const CubatureRule r = gauss_rule_omega(p, g, 4);
            for (int a = 0; a <= r.degree; ++a)
                for (int b = 0; a + b <= r.degree; ++b) {
                    const double ref = (double)oracle::omega_moment(p.alpha, p.beta, g, a, b);
                    const double got = apply(r, [&](double u, double v) { return std::pow(u, a) * std::pow(v, b); });
                    EXPECT_NEAR(got, ref, 1e-9 * (1 + std::abs(ref)));
                }
        }
}

TEST(Exactness, SquareChebyshevAgainstWallis) {
    const CubatureRule r = minimal_rule_square({-0.5, -0.5}, -0.5, 3);
    EXPECT_EQ(r.degree, 11);
    for (int a = 0; a <= 11; ++a)
        for (int b = 0; a + b <= 11; ++b) {
            const double got = apply(r, [&](double x, double y) { return std::pow(x, a) * std::pow(y, b); });
            EXPECT_NEAR(got, (double)(oracle::wallis(a) * oracle::wallis(b)), 1e-12);
            if ((a + b) % 2) {
                EXPECT_NEAR(got, 0.0, 1e-15);
            }
        }
}

TEST(Exactness, PlusHalfMinimalRulesStopAtDegree4nMinus5) {
    for (int n : {2, 3, 5}) {
        CubatureRule r = minimal_rule_square({0, 0}, 0.5, n);
        EXPECT_EQ(r.degree, 4 * n - 5);
        // claiming two more degrees must fail
        r.degree = 4 * n - 3;
        const ExactnessReport rep =
            verify_exactness(r, ReferenceIntegrator::for_degree(r.weight, r.degree + 1), TestFamily::SymmetryReduced);
        EXPECT_FALSE(rep.pass) << "n=" << n;
        EXPECT_GT(rep.max_error, 1e-9) << "n=" << n;
    }
}

TEST(VerifyExactness, AllFamilies) {
    for (const auto& p : kParams)
        for (DomainTag d : kDomains)
            for (double g : {-0.5, 0.5})
                for (int n : {2, 3, 5, 8}) {
                    const CubatureRule r = make_rule(d, p, g, n);
                    const auto R = ReferenceIntegrator::for_degree(r.weight, r.degree + 1);
                    const bool sq = d == DomainTag::Square || d == DomainTag::Rhombus;
                    const ExactnessReport rep =
                        verify_exactness(r, R, sq ? TestFamily::SymmetryReduced : TestFamily::Monomials);
                    EXPECT_TRUE(rep.pass) << to_string(d) << " " << p.alpha << "," << p.beta << " g=" << g << " n=" << n
                                          << " max_err=" << rep.max_error << " probe=" << rep.max_probe_error;
                    EXPECT_TRUE(rep.probe_certified);
                    EXPECT_LT(rep.max_error, 1e-9);
                    EXPECT_GT(rep.max_probe_error, kProbeGap);
                }
}

TEST(VerifyExactness, MonomialsOnSquare) {
    const CubatureRule r = minimal_rule_square({0.5, -0.25}, -0.5, 3);
    const ExactnessReport rep = verify_exactness(r, ReferenceIntegrator::for_degree(r.weight, 12));
    EXPECT_TRUE(rep.pass);
    EXPECT_EQ(rep.entries.size(), 78u); // monomials of degree <= 11
    for (const auto& e : rep.entries)
        if (e.degree % 2) {
            EXPECT_NEAR(e.cubature, 0.0, 1e-15);
        }
}

TEST(VerifyExactness, Errors) {
    const CubatureRule r = gauss_rule_omega({0, 0}, -0.5, 3);
    EXPECT_THROW(verify_exactness(r, ReferenceIntegrator({WeightFamily::W_OMEGA, {0, 0}, 0.5})), capability_error);
    EXPECT_THROW(verify_exactness(r, ReferenceIntegrator(r.weight), TestFamily::SymmetryReduced), contract_error);
}

TEST(VerifyExactness, LowOracleOrderSkipsProbe) {
    const CubatureRule r = gauss_rule_omega({0, 0}, -0.5, 3);
    const ExactnessReport rep = verify_exactness(r, ReferenceIntegrator(r.weight, 3));
    EXPECT_FALSE(rep.probe_certified);
    EXPECT_TRUE(rep.probes.empty());
    EXPECT_TRUE(rep.pass);
}

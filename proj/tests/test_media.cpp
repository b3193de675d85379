#include <cmath>
#include <numbers>

#include "doctest.h"
#include "muskin/errors.hpp"
#include "muskin/media.hpp"

using muskin::cplx;
using muskin::MediaParams;

TEST_CASE("lambda for unit media") {
    const auto d = muskin::derive_params(MediaParams{});
    // 2^(1/4) exp(-3 i pi / 8), independently evaluated.
    const cplx expected = std::pow(2.0, 0.25) * cplx(std::cos(3.0 * std::numbers::pi / 8.0), -std::sin(3.0 * std::numbers::pi / 8.0));
    CHECK(std::abs(d.lambda - expected) < 1e-15);
    CHECK(std::abs(d.lambda - cplx(0.455090, -1.098684)) < 1e-6);
    CHECK(std::abs(-d.lambda * d.lambda - cplx(1.0, 1.0)) < 1e-15);
    CHECK(d.eps == 1.0);
}

TEST_CASE("lambda identity and sign over a parameter grid") {
    for (int a = 0; a < 5; ++a)
        for (int b = 0; b < 5; ++b)
            for (int c = 0; c < 5; ++c) {
                MediaParams p;
                p.omega = std::pow(10.0, -1.0 + 0.5 * a);
                p.sigma_minus = std::pow(10.0, -1.0 + 0.5 * b);
                p.mu_plus = std::pow(10.0, -1.0 + 0.5 * c);
                const auto d = muskin::derive_params(p);
                const cplx rhs = d.kappa_plus * d.kappa_plus * d.alpha_minus;
                CHECK(d.lambda.real() > 0.0);
                CHECK(std::abs(-d.lambda * d.lambda - rhs) / std::norm(d.lambda) < 1e-12);
                CHECK(d.theta_minus > 0.0);
                CHECK(d.theta_minus < std::numbers::pi / 2);
            }
}

TEST_CASE("negative frequency keeps Re lambda positive") {
    MediaParams p;
    p.omega = -2.0;
    const auto d = muskin::derive_params(p);
    CHECK(d.lambda.real() > 0.0);
    CHECK(std::abs(-d.lambda * d.lambda - d.kappa_plus * d.kappa_plus * d.alpha_minus) < 1e-12 * std::norm(d.lambda));
}

TEST_CASE("eps decreases with mu_r and lambda does not depend on it") {
    MediaParams p;
    double prev = 2.0;
    const cplx lam = muskin::derive_params(p).lambda;
    for (double mr : {1.0, 10.0, 1e4, 1e8, 1e12}) {
        p.mu_r = mr;
        const auto d = muskin::derive_params(p);
        CHECK(d.eps < prev);
        prev = d.eps;
        CHECK(d.lambda == lam);
        const cplx k = d.k_minus();
        CHECK(std::abs(k * k - d.kappa_plus * d.kappa_plus * d.alpha_minus / (d.eps * d.eps)) < 1e-12 * std::norm(k));
    }
}

TEST_CASE("stability constants") {
    MediaParams p;
    auto s = muskin::stability_constants(p);
    CHECK(std::abs(s.m - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(s.C1 - std::sqrt(2.0)) < 1e-12);
    CHECK(std::abs(s.C2 - std::sqrt(2.0)) < 1e-12);
    p.eps0 = 1e-6;
    s = muskin::stability_constants(p);
    CHECK(std::abs(s.m - 1.0) < 1e-5);
    CHECK(std::abs(s.C1 - 1.0) < 1e-5);
    CHECK(std::abs(s.C2 - 1.0) < 1e-5);
    MediaParams q;
    q.sigma_plus = 3.0;
    q.sigma_minus = 0.5;
    MediaParams r = q;
    std::swap(r.sigma_plus, r.sigma_minus);
    const auto sq = muskin::stability_constants(q), sr = muskin::stability_constants(r);
    CHECK(sq.m == sr.m);
    CHECK(sq.C1 == sr.C1);
    CHECK(sq.C2 == sr.C2);
}

TEST_CASE("invalid parameters are rejected") {
    MediaParams p;
    p.omega = 0.0;
    CHECK_THROWS_AS(muskin::derive_params(p), muskin::ParameterDomainError);
    p = {};
    p.sigma_plus = 0.0;
    CHECK_THROWS_AS(muskin::derive_params(p), muskin::ParameterDomainError);
    p = {};
    p.mu_r = 0.5;
    CHECK_THROWS_AS(muskin::derive_params(p), muskin::ParameterDomainError);
    p = {};
    p.eps0 = -1.0;
    CHECK_THROWS_AS(muskin::stability_constants(p), muskin::ParameterDomainError);
}

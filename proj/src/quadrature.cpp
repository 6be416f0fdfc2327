#include "anisomesh/quadrature.hpp"

namespace anisomesh {

namespace {

constexpr double kA = 0.063089014491502228340331602870819;
constexpr double kWa = 0.050844906370206816920936809106869;
constexpr double kB = 0.24928674517091042129163855310702;
constexpr double kWb = 0.11678627572637936602528961138558;
constexpr double kC1 = 0.053145049844816947353249671631398;
constexpr double kC2 = 0.31035245103378440541660773395655;
constexpr double kC3 = 1.0 - kC1 - kC2;
constexpr double kWc = 0.082851075618373575193553456420442;

constexpr std::array<QuadPoint, 12> kDegree6{{
    {{1.0 - 2.0 * kA, kA, kA}, kWa},
    {{kA, 1.0 - 2.0 * kA, kA}, kWa},
    {{kA, kA, 1.0 - 2.0 * kA}, kWa},
    {{1.0 - 2.0 * kB, kB, kB}, kWb},
    {{kB, 1.0 - 2.0 * kB, kB}, kWb},
    {{kB, kB, 1.0 - 2.0 * kB}, kWb},
    {{kC1, kC2, kC3}, kWc},
    {{kC1, kC3, kC2}, kWc},
    {{kC2, kC1, kC3}, kWc},
    {{kC2, kC3, kC1}, kWc},
    {{kC3, kC1, kC2}, kWc},
    {{kC3, kC2, kC1}, kWc},
}};

}  // namespace

std::span<const QuadPoint> triangle_rule_degree6() { return kDegree6; }

}  // namespace anisomesh

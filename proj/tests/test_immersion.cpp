#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "hkw/immersion.hpp"
#include "test_support.hpp"

using namespace hkw;
using hkw::testing::max_abs;
using hkw::testing::rel_err;

namespace {

SpacePtr h(int n) { return std::make_shared<const QuaternionicSpace>(standard_space(n)); }

Matrix quaternionic_columns(int n, std::initializer_list<int> coords) {
  Matrix b(4 * n, 4 * static_cast<int>(coords.size()));
  int c = 0;
  for (int coord : coords)
    for (int unit = 0; unit < 4; ++unit) b.col(c++) = unit_vector(n, coord, unit);
  return b;
}

Subvariety hspan(const SpacePtr& s, std::initializer_list<int> coords, std::string name) {
  return Subvariety::make(s, quaternionic_columns(s->n(), coords), std::nullopt, std::move(name));
}

Subvariety complex_plane(const SpacePtr& s) {
  Matrix b(4 * s->n(), 4);
  b << unit_vector(s->n(), 0, 0), unit_vector(s->n(), 0, 1), unit_vector(s->n(), 1, 0), unit_vector(s->n(), 1, 1);
  return Subvariety::make(s, b, std::nullopt, "C2");
}

void check_certificate_sound(const Subvariety& x, const HKCertificate& cert) {
  REQUIRE(cert.valid());
  const auto& st = cert.structure();
  const int m = st.real_dim();
  const Matrix id = Matrix::Identity(m, m);
  CHECK(max_abs(st.I() * st.J() - st.K()) <= 1e-8);
  CHECK(max_abs(st.J() * st.J() + id) <= 1e-8);
  CHECK(max_abs(st.K() * st.K() + id) <= 1e-8);
  CHECK(max_abs(st.J().transpose() * st.g() * st.J() - st.g()) <= 1e-8 * cert.scale);
  const auto omega = holomorphic_symplectic_form(st);
  CHECK(max_abs(omega.re.matrix.entries() - cert.restricted_Omega.re.matrix.entries()) <= 1e-8);
  CHECK(max_abs(omega.im.matrix.entries() - cert.restricted_Omega.im.matrix.entries()) <= 1e-8);
  // Kahler form of the certificate is scale * omega_I, in the certificate's frame.
  const Matrix wi_frame = cert.frame.transpose() * x.space().g() * x.space().I() * cert.frame;
  CHECK(max_abs(kahler_form(st, FormLabel::omega_I).matrix.entries() - cert.scale * wi_frame) <= 1e-8);
}

}  // namespace

TEST_CASE("is_symplectic_immersion") {
  const auto s = h(2);
  const auto whole = hspan(s, {0, 1}, "M");
  const auto line = hspan(s, {0}, "He1");
  CHECK(is_symplectic_immersion(line, whole).symplectic);
  CHECK(std::abs(is_symplectic_immersion(line, whole).restricted_pfaffian) == doctest::Approx(1.0));

  const auto plane = complex_plane(s);
  const auto edge = is_symplectic_immersion(plane, whole);
  CHECK_FALSE(edge.symplectic);
  CHECK(std::abs(edge.restricted_pfaffian) == 0.0);

  const auto self = is_symplectic_immersion(line, line);
  CHECK(self.symplectic);
  CHECK(self.inclusion_residual <= 1e-15);
  CHECK_FALSE(is_symplectic_immersion(plane, plane).symplectic);

  CHECK_THROWS_AS(is_symplectic_immersion(whole, line), StructureError);
  CHECK_THROWS_AS(is_symplectic_immersion(line, hspan(h(3), {0, 1}, "other")), DimensionError);
}

TEST_CASE("linear_calabi_yau on quaternionic subspaces") {
  const auto s = h(3);
  const auto x = hspan(s, {0, 2}, "Q");
  const auto cert = linear_calabi_yau(x);
  CHECK(cert.scale == doctest::Approx(1.0));
  check_certificate_sound(x, cert);
  // Already hyperkahler: the recovered triple is the restricted (I, J, K, g).
  const Matrix& u = cert.frame;
  CHECK(max_abs(cert.structure().J() - u.transpose() * s->J() * u) <= 1e-12);
  CHECK(max_abs(cert.structure().K() - u.transpose() * s->K() * u) <= 1e-12);
  CHECK(max_abs(cert.structure().g() - Matrix::Identity(8, 8)) <= 1e-12);
}

TEST_CASE("linear_calabi_yau on the whole rotated space recovers the rotated pair") {
  const std::complex<double> lambda = std::polar(1.0, 0.7);
  const auto rotated = std::make_shared<const QuaternionicSpace>(rotate_structure(standard_space(2), lambda));
  const auto x = Subvariety::make(rotated, Matrix::Identity(8, 8), std::nullopt, "M");
  const auto cert = linear_calabi_yau(x);
  CHECK(cert.scale == doctest::Approx(1.0));
  check_certificate_sound(x, cert);
  const Matrix& u = cert.frame;
  CHECK(max_abs(cert.structure().J() - u.transpose() * rotated->J() * u) <= 1e-10);
  CHECK(max_abs(cert.structure().K() - u.transpose() * rotated->K() * u) <= 1e-10);
}

TEST_CASE("linear_calabi_yau on V_theta, theta = pi/4") {
  // Regression fixture: in complex dimension 2 the restricted Omega has a
  // single singular value, so the rescaled triple is always quaternionic.
  const auto x = interpolating_subvariety(h(2), std::numbers::pi / 4);
  const auto cert = linear_calabi_yau(x);
  CHECK(cert.valid());
  CHECK(cert.scale == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  check_certificate_sound(x, cert);
}

TEST_CASE("linear_calabi_yau refuses degenerate and odd-dimensional subjects") {
  CHECK_THROWS_AS(linear_calabi_yau(complex_plane(h(2))), DegreeError);
  std::mt19937_64 rng(31);
  CHECK_THROWS_AS(linear_calabi_yau(random_complex_subvariety(h(2), 1, rng)), DegreeError);
}

TEST_CASE("generic complex 4-planes have no certificate; the failure names an identity") {
  std::mt19937_64 rng(32);
  const auto x = random_complex_subvariety(h(3), 4, rng);
  const auto cert = linear_calabi_yau(x);
  CHECK_FALSE(cert.valid());
  CHECK(cert.failure_reason().find("violates") != std::string::npos);
}

TEST_CASE("certificate scale and degree scaling laws") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto x = random_complex_subvariety(h(3), 2, rng).with_lattice(hkw::testing::random_matrix(4, 4, rng));
    const auto cert = linear_calabi_yau(x);
    check_certificate_sound(x, cert);
    const auto report = wirtinger_number(x);
    // The Kahler degree of scale * omega_I matches |deg_Omega|.
    TwoForm scaled{kahler_form(x.space(), FormLabel::omega_I).matrix * cert.scale, FormLabel::other};
    CHECK(rel_err(form_degree(scaled, x), std::abs(report.deg_Omega)) <= 1e-8);
    // deg under c * omega is c^d deg under omega.
    const double c = 0.3 + trial * 0.1;
    TwoForm c_omega{kahler_form(x.space(), FormLabel::omega_I).matrix * c, FormLabel::other};
    CHECK(rel_err(form_degree(c_omega, x), std::pow(c, 2) * report.deg_omega) <= 1e-10);
  }
}

TEST_CASE("verify_chain on a trianalytic chain") {
  const auto s = h(3);
  const std::vector<Subvariety> chain{hspan(s, {0}, "H1"), hspan(s, {0, 1}, "H12"), hspan(s, {0, 1, 2}, "H123")};
  const auto report = verify_chain(chain);
  CHECK(report.pass);
  REQUIRE(report.links.size() == 2);
  for (const auto& r : report.reports) CHECK(r.wirtinger == doctest::Approx(1.0));
  for (const auto& l : report.links) {
    CHECK(l.status == LinkStatus::pass);
    CHECK(l.corollary_applies);
    CHECK(l.corollary_holds);
  }
}

TEST_CASE("verify_chain through an interpolating middle element") {
  const auto s = h(3);
  for (double theta : {0.0, std::numbers::pi / 8, std::numbers::pi / 4, 3 * std::numbers::pi / 8}) {
    const auto v = interpolating_subvariety(s, theta, 1, 2);
    Matrix middle(12, 8);
    middle << quaternionic_columns(3, {0}), v.basis();
    const std::vector<Subvariety> chain{hspan(s, {0}, "H1"), Subvariety::make(s, middle, std::nullopt, "H1+V"),
                                        hspan(s, {0, 1, 2}, "M")};
    const auto report = verify_chain(chain);
    CHECK(report.pass);
    // Singular values of Omega on the middle element are (1, cos theta):
    // certified exactly when they agree.
    const bool certified = report.links[0].status != LinkStatus::skipped_no_certificate;
    CHECK(certified == (theta == 0.0));
    if (certified) {
      CHECK(report.reports[1].wirtinger == doctest::Approx(1.0));
      CHECK(report.reports[1].trianalytic);
    } else {
      CHECK_FALSE(report.links[0].reason.empty());
      CHECK(report.reports[1].wirtinger == doctest::Approx(std::sqrt(std::cos(theta))).epsilon(1e-12));
    }
    CHECK(report.links[1].status == LinkStatus::pass);
  }
}

TEST_CASE("verify_chain edge cases") {
  const auto s = h(2);
  const std::vector<Subvariety> single{hspan(s, {0}, "H1")};
  const auto report = verify_chain(single);
  CHECK(report.pass);
  CHECK(report.links.empty());

  const std::vector<Subvariety> reversed{hspan(s, {0, 1}, "M"), hspan(s, {0}, "H1")};
  try {
    (void)verify_chain(reversed);
    FAIL("expected an error");
  } catch (const StructureError& e) {
    CHECK(std::string(e.what()).find("link 0 (M -> H1)") != std::string::npos);
  }

  const std::vector<Subvariety> degenerate{complex_plane(s), hspan(s, {0, 1}, "M")};
  CHECK_THROWS_WITH_AS(verify_chain(degenerate), doctest::Contains("not a symplectic immersion"), StructureError);

  std::mt19937_64 rng(34);
  const std::vector<Subvariety> odd{random_complex_subvariety(s, 1, rng, "L")};
  CHECK_THROWS_AS(verify_chain(odd), DegreeError);
  CHECK_THROWS_AS(verify_chain({}), Error);
}

TEST_CASE("generate_chain_suite") {
  const auto a = generate_chain_suite(0, 1);
  const auto b = generate_chain_suite(0, 1);
  REQUIRE(a.size() == 1);
  REQUIRE(a[0].elements.size() == b[0].elements.size());
  for (std::size_t k = 0; k < a[0].elements.size(); ++k) {
    CHECK(a[0].elements[k].basis() == b[0].elements[k].basis());
  }
  CHECK_THROWS_AS(generate_chain_suite(0, 0), Error);

  const auto suite = generate_chain_suite(7, 40);
  for (std::size_t start = 0; start + 10 <= suite.size(); start += 10) {
    int trianalytic = 0;
    for (std::size_t k = start; k < start + 10; ++k) trianalytic += suite[k].family == "trianalytic";
    CHECK(trianalytic >= 1);
  }
  int skipped = 0;
  int certified_nontrivial = 0;
  for (const auto& chain : suite) {
    for (std::size_t k = 0; k + 1 < chain.elements.size(); ++k) {
      CHECK(is_symplectic_immersion(chain.elements[k], chain.elements[k + 1]).inclusion_residual <= 1e-10);
    }
    const auto report = verify_chain(chain.elements);
    CHECK(report.pass);
    skipped += report.skipped_links();
    for (const auto& l : report.links) {
      certified_nontrivial += l.status == LinkStatus::pass && l.w_outer < 1.0 - 1e-6;
    }
  }
  CHECK(skipped > 0);
  CHECK(certified_nontrivial > 0);
}

#include <catch2/catch_amalgamated.hpp>

#include "grasmap/embed.hpp"

using namespace grasmap;

namespace {

template <class K>
std::vector<K> unit(int n, int i) {
  std::vector<K> v(static_cast<size_t>(n));
  v[static_cast<size_t>(i)] = K(1);
  return v;
}

template <class K>
Mat<K> coordinate_inclusion(int n, int s, const std::vector<int>& targets) {
  Mat<K> m(n, s);
  for (int i = 0; i < n; ++i) m.at(i, targets[static_cast<size_t>(i)]) = K(1);
  return m;
}

template <class K>
EmbeddingMap<K> identity_extension(const GrassmannianDesc<K>& x) {
  return build_standard_extension<K>(x, x, Mat<K>::identity(x.n), Subspace<K>::zero(x.n));
}

}  // namespace

TEST_CASE("standard extension: identity and the simplest strict case") {
  using F = Gf<3>;
  auto p1 = make_grassmannian<F>(VarietyKind::ordinary, 1, 2);
  auto id = identity_extension(p1);
  for (const auto& p : enumerate_points(p1)) REQUIRE(id.apply_space(p.space) == p.space);

  // span(v) -> span(v, e3) inside G(2, V_4)
  auto g24 = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  Mat<F> nu = coordinate_inclusion<F>(2, 4, {0, 1});
  Subspace<F> w2 = Subspace<F>::span_of(4, {unit<F>(4, 2)});
  auto phi = build_standard_extension<F>(p1, g24, nu, w2);
  REQUIRE(std::string(phi.spec.variant_name()) == "standard-extension");
  std::vector<F> v{F(1), F(2)};
  Subspace<F> img = phi.apply_space(Subspace<F>::span_of(2, {v}));
  REQUIRE(img == Subspace<F>::span_of(4, {std::vector<F>{F(1), F(2), F(0), F(0)}, unit<F>(4, 2)}));

  auto chk = verify_embedding(phi);
  REQUIRE(chk.points == 4);
  REQUIRE(chk.injective);

  REQUIRE(constant_fiber_part(phi) == w2);

  auto lin = is_linear(phi);
  REQUIRE(lin.linear);
  REQUIRE(lin.lines_checked == 1);  // the source is a single projective line

  auto rep = pullback_fiber_shape(phi);
  REQUIRE(rep.shape == FiberShape::tautological_type);
  REQUIRE_FALSE(rep.dualized);
  REQUIRE(rep.recovered.has_value());
  REQUIRE(*rep.recovered == nu);

  Rng rng(2024);
  auto eq = equivariance_witness(phi, 20, rng);
  REQUIRE(eq.status == WitnessStatus::verified);
  REQUIRE(eq.samples == 20);
}

TEST_CASE("standard extension: builder rejections") {
  using F = Gf<3>;
  auto p1 = make_grassmannian<F>(VarietyKind::ordinary, 1, 2);
  auto g24 = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);

  Mat<F> degenerate(2, 4);  // rank 1
  degenerate.at(0, 0) = F(1);
  degenerate.at(1, 0) = F(2);
  REQUIRE_THROWS_AS(
      build_standard_extension<F>(p1, g24, degenerate, Subspace<F>::span_of(4, {unit<F>(4, 2)})),
      error);

  // fixed summand overlapping the image of nu
  Mat<F> nu = coordinate_inclusion<F>(2, 4, {0, 1});
  REQUIRE_THROWS_AS(
      build_standard_extension<F>(p1, g24, nu, Subspace<F>::span_of(4, {unit<F>(4, 0)})), error);

  // dimension bookkeeping: eff_m + dim W'' must equal target m
  REQUIRE_THROWS_AS(build_standard_extension<F>(p1, g24, nu, Subspace<F>::zero(4)), error);

  // form-compatibility: a symplectic inclusion that kills the pairing
  auto gs12 = make_grassmannian<F>(VarietyKind::symplectic, 1, 2);
  auto gs14 = make_grassmannian<F>(VarietyKind::symplectic, 1, 4);
  Mat<F> bad = coordinate_inclusion<F>(2, 4, {0, 1});  // e,f -> e1,e2: pairing lost
  REQUIRE_THROWS_AS(build_standard_extension<F>(gs12, gs14, bad, Subspace<F>::zero(4)), error);
  Mat<F> good = coordinate_inclusion<F>(2, 4, {0, 2});  // e,f -> e1,f1
  auto ok = build_standard_extension<F>(gs12, gs14, good, Subspace<F>::zero(4));
  REQUIRE(verify_embedding(ok).injective);
}

TEST_CASE("standard extension: orthogonal instance with a one-dimensional summand is linear") {
  using F = Gf<3>;
  auto src = make_grassmannian<F>(VarietyKind::orthogonal, 1, 5);
  auto tgt = make_grassmannian<F>(VarietyKind::orthogonal, 2, 9);
  Mat<F> nu = standard_form_inclusion<F>(*src.form, *tgt.form);
  Subspace<F> w2 = Subspace<F>::span_of(9, {unit<F>(9, 2)});  // e3 of the larger space
  auto phi = build_standard_extension<F>(src, tgt, nu, w2);

  auto chk = verify_embedding(phi);
  REQUIRE(chk.points == 40);
  REQUIRE(chk.injective);
  REQUIRE(constant_fiber_part(phi) == w2);
  REQUIRE(is_linear(phi).linear);
}

TEST_CASE("standard extension: maximal-isotropic source into non-maximal target flips linearity") {
  using F = Gf<3>;
  auto src = make_grassmannian<F>(VarietyKind::orthogonal, 2, 4, 0);
  auto tgt = make_grassmannian<F>(VarietyKind::orthogonal, 2, 7);
  // e1,e2,f1,f2 of V_4 land on the first two hyperbolic pairs of V_7
  Mat<F> nu = coordinate_inclusion<F>(4, 7, {0, 1, 3, 4});
  REQUIRE(Mat<F>(nu * tgt.form->gram * nu.transpose()) == src.form->gram);

  REQUIRE_THROWS_AS(build_standard_extension<F>(src, tgt, nu, Subspace<F>::zero(7)), error);

  auto phi = build_standard_extension<F>(src, tgt, nu, Subspace<F>::zero(7), false, false);
  REQUIRE(verify_embedding(phi).injective);
  auto lin = is_linear(phi);
  REQUIRE_FALSE(lin.linear);
  REQUIRE(lin.witness_span == 3);  // the image of a line is a conic
  REQUIRE_FALSE(lin.witness_points.empty());
}

TEST_CASE("isotropic extension: lines into a symplectic space") {
  using F = Gf<3>;
  auto src = make_grassmannian<F>(VarietyKind::ordinary, 1, 2);
  auto tgt = make_grassmannian<F>(VarietyKind::symplectic, 1, 4);
  Subspace<F> w = Subspace<F>::span_of(4, {unit<F>(4, 0), unit<F>(4, 1)});
  REQUIRE(tgt.form->is_isotropic(w));
  auto phi = build_isotropic_extension<F>(src, tgt, w, coordinate_inclusion<F>(2, 4, {0, 1}));
  REQUIRE(std::string(phi.spec.variant_name()) == "isotropic-extension");
  auto& payload = std::get<IsotropicExtensionSpec<F>>(phi.spec.v);
  REQUIRE(payload.minimal);  // dim W = 2 = witt index of the symplectic V_4

  for (const auto& p : enumerate_points(src)) {
    Subspace<F> img = phi.apply_space(p.space);
    REQUIRE(w.contains(img));
    REQUIRE(tgt.form->is_isotropic(img));
  }
  REQUIRE(verify_embedding(phi).injective);
}

TEST_CASE("isotropic extension: minimal flag tracks maximality of W") {
  using F = Gf<3>;
  auto src = make_grassmannian<F>(VarietyKind::ordinary, 2, 3);
  Mat<F> f3 = coordinate_inclusion<F>(3, 8, {0, 1, 2});
  auto tgt8 = make_grassmannian<F>(VarietyKind::orthogonal, 2, 8);
  Subspace<F> w8 = Subspace<F>::from_matrix(8, f3);
  auto phi8 = build_isotropic_extension<F>(src, tgt8, w8, f3);
  REQUIRE_FALSE(std::get<IsotropicExtensionSpec<F>>(phi8.spec.v).minimal);  // witt = 4 > 3

  Mat<F> f7 = coordinate_inclusion<F>(3, 7, {0, 1, 2});
  auto tgt7 = make_grassmannian<F>(VarietyKind::orthogonal, 2, 7);
  Subspace<F> w7 = Subspace<F>::from_matrix(7, f7);
  auto phi7 = build_isotropic_extension<F>(src, tgt7, w7, f7);
  REQUIRE(std::get<IsotropicExtensionSpec<F>>(phi7.spec.v).minimal);  // witt = 3

  auto chk = verify_embedding(phi7);
  REQUIRE(chk.points == 13);
  REQUIRE(chk.injective);
  REQUIRE(is_linear(phi7).linear);

  // rejections: W not isotropic; wrong subspace dimension in the target
  std::vector<F> bad{F(1), F(0), F(0), F(1), F(0), F(0), F(0)};  // q(e1+f1) != 0
  REQUIRE_THROWS_AS(build_isotropic_extension<F>(
                        src, tgt7,
                        Subspace<F>::span_of(7, {bad, unit<F>(7, 1), unit<F>(7, 2)}),
                        Mat<F>::from_rows({bad, unit<F>(7, 1), unit<F>(7, 2)})),
                    error);
  auto tgt_m3 = make_grassmannian<F>(VarietyKind::orthogonal, 3, 8);
  REQUIRE_THROWS_AS(build_isotropic_extension<F>(src, tgt_m3, w8, f3), error);
}

TEST_CASE("tautological embedding: censuses and linearity boundary") {
  using F2 = Gf<2>;
  auto gs = make_grassmannian<F2>(VarietyKind::symplectic, 2, 4);
  auto taut2 = build_tautological(gs);
  REQUIRE(std::string(taut2.spec.variant_name()) == "tautological");
  auto chk = verify_embedding(taut2);
  REQUIRE(chk.points == 15);
  REQUIRE(chk.injective);
  REQUIRE(enumerate_points(taut2.target).size() == 35);
  REQUIRE_THROWS_AS(is_linear(taut2), error);  // the line criterion needs q >= 3

  using F = Gf<3>;
  auto go27 = build_tautological(make_grassmannian<F>(VarietyKind::orthogonal, 2, 7));
  REQUIRE(is_linear(go27).linear);
  REQUIRE(constant_fiber_part(go27).dim() == 0);

  auto go36 = build_tautological(make_grassmannian<F>(VarietyKind::orthogonal, 3, 6, 0));
  auto lin = is_linear(go36);
  REQUIRE_FALSE(lin.linear);
  REQUIRE(lin.witness_span == 3);  // lines of the maximal family map to conics
  REQUIRE(lin.witness_points.size() == 4);
}

TEST_CASE("duality twist: annihilator map is an injective involution") {
  using F = Gf<3>;
  auto g13 = make_grassmannian<F>(VarietyKind::ordinary, 1, 3);
  auto d1 = build_duality(g13);
  REQUIRE(std::string(d1.spec.variant_name()) == "duality-twist");
  auto chk = verify_embedding(d1);
  REQUIRE(chk.points == 13);
  REQUIRE(chk.injective);

  auto d2 = build_duality(d1.target);
  auto round = compose(d1, d2);
  for (const auto& p : enumerate_points(g13)) REQUIRE(round.apply_space(p.space) == p.space);
}

TEST_CASE("degree-two relations on the minimal projective image") {
  using F = Gf<3>;
  REQUIRE(compute_I2(make_grassmannian<F>(VarietyKind::ordinary, 1, 3)).empty());
  REQUIRE(compute_I2(make_grassmannian<F>(VarietyKind::ordinary, 2, 4)).size() == 1);
  REQUIRE(compute_I2(make_grassmannian<F>(VarietyKind::orthogonal, 1, 5)).size() == 1);
  REQUIRE(compute_I2(make_grassmannian<F>(VarietyKind::symplectic, 2, 4)).size() == 1);

  REQUIRE_THROWS_AS(compute_I2(make_grassmannian<Gf<2>>(VarietyKind::ordinary, 2, 4)), error);

  // frame dimensions: the canonical image spans of small varieties
  REQUIRE(make_minimal_frame(make_grassmannian<F>(VarietyKind::ordinary, 2, 4)).dim() == 6);
  REQUIRE(make_minimal_frame(make_grassmannian<F>(VarietyKind::symplectic, 2, 4)).dim() == 5);
  REQUIRE(make_minimal_frame(make_grassmannian<F>(VarietyKind::orthogonal, 1, 5)).dim() == 5);
  REQUIRE(make_minimal_frame(make_grassmannian<F>(VarietyKind::orthogonal, 3, 6, 0)).dim() == 4);
}

TEST_CASE("quadric map of a degree-two relation: dimension law and image") {
  using F = Gf<3>;

  // rank-6 relation on the 6-dimensional frame: n = 2*6 - 6 = 6
  auto g24 = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto rel = compute_I2(g24);
  auto kappa = build_kappa_p(g24, rel.at(0));
  REQUIRE(std::string(kappa.spec.variant_name()) == "kappa-p");
  const auto& payload = std::get<KappaPSpec<F>>(kappa.spec.v);
  REQUIRE(payload.rank == 6);
  REQUIRE(payload.split_target);
  REQUIRE(kappa.target.kind == VarietyKind::orthogonal);
  REQUIRE(kappa.target.m == 1);
  REQUIRE(kappa.target.n == 6);

  auto chk = verify_embedding(kappa);
  REQUIRE(chk.points == 130);
  REQUIRE(chk.injective);

  // every image point satisfies the target quadric, and the image spans the
  // whole target space (it is not contained in a hyperplane section)
  Subspace<F> span = Subspace<F>::zero(6);
  for (const auto& p : enumerate_points(g24)) {
    Subspace<F> img = kappa.apply_space(p.space);
    REQUIRE(kappa.target.form->eval(img.basis.row(0), img.basis.row(0)).is_zero());
    span = sum(span, img);
  }
  REQUIRE(span.dim() == 6);

  REQUIRE(is_linear(kappa).linear);
  REQUIRE(constant_fiber_part(kappa).dim() == 0);
  auto rep = pullback_fiber_shape(kappa);
  REQUIRE(rep.shape == FiberShape::line_type);

  Rng rng(5);
  auto eq = equivariance_witness(kappa, 1, rng);
  REQUIRE(eq.status == WitnessStatus::no_witness_constructed);

  // rank-5 relation on a 5-dimensional frame: n = 2*5 - 5 = 5
  auto go15 = make_grassmannian<F>(VarietyKind::orthogonal, 1, 5);
  auto k2 = build_kappa_p(go15, compute_I2(go15).at(0));
  REQUIRE(k2.target.n == 5);
  REQUIRE(verify_embedding(k2).injective);
  REQUIRE(is_linear(k2).linear);

  // the symplectic grassmannian of planes in V_4 is carried onto that quadric
  auto gs24 = make_grassmannian<F>(VarietyKind::symplectic, 2, 4);
  auto k3 = build_kappa_p(gs24, compute_I2(gs24).at(0));
  REQUIRE(k3.target.n == 5);
  auto chk3 = verify_embedding(k3);
  REQUIRE(chk3.points == 40);
  REQUIRE(chk3.injective);
  REQUIRE(enumerate_points(k3.target).size() == 40);  // bijective onto the quadric

  // rejections: the zero relation, and a relation that fails on some point
  REQUIRE_THROWS_AS(build_kappa_p(g24, QuadraticForm<F>{Mat<F>(6, 6)}), error);
  REQUIRE_THROWS_AS(build_kappa_p(g24, QuadraticForm<F>{Mat<F>::identity(6)}), error);
}

TEST_CASE("theta: annihilator-extension into the maximal orthogonal family") {
  using F = Gf<3>;
  REQUIRE_THROWS_AS(build_theta<F>(4, 2), error);  // 2k must stay below m
  REQUIRE_THROWS_AS(build_theta<F>(4, 0), error);

  auto th = build_theta<F>(4, 1);
  REQUIRE(std::string(th.spec.variant_name()) == "theta");
  REQUIRE(th.source == make_grassmannian<F>(VarietyKind::ordinary, 2, 4));
  REQUIRE(th.target == make_grassmannian<F>(VarietyKind::orthogonal, 4, 8, 0));

  // image formula on a split point: span(e1,e2) picks up the two dual vectors
  Subspace<F> u = Subspace<F>::span_of(4, {unit<F>(4, 0), unit<F>(4, 1)});
  Subspace<F> img = th.apply_space(u);
  REQUIRE(img == Subspace<F>::span_of(
                     8, {unit<F>(8, 0), unit<F>(8, 1), unit<F>(8, 6), unit<F>(8, 7)}));

  auto chk = verify_embedding(th);
  REQUIRE(chk.points == 130);
  REQUIRE(chk.injective);

  Rng rng(11);
  auto eq = equivariance_witness(th, 2, rng);
  REQUIRE(eq.status == WitnessStatus::verified);

  // the odd-codimension step lands in the other component
  auto th_odd = build_theta<F>(4, 1, true);
  REQUIRE(th_odd.source == make_grassmannian<F>(VarietyKind::ordinary, 3, 4));
  REQUIRE(th_odd.target == make_grassmannian<F>(VarietyKind::orthogonal, 4, 8, 1));
  REQUIRE(verify_embedding(th_odd).injective);
}

TEST_CASE("theta: linearity at the next size", "[slow]") {
  using F = Gf<3>;
  auto th = build_theta<F>(5, 1);
  REQUIRE(th.source == make_grassmannian<F>(VarietyKind::ordinary, 3, 5));
  REQUIRE(th.target == make_grassmannian<F>(VarietyKind::orthogonal, 5, 10, 0));
  REQUIRE(is_linear(th).linear);
}

TEST_CASE("pencil map: image lines collect the pure spinors over a point") {
  using F = Gf<3>;
  REQUIRE_THROWS_AS(build_delta<F>(3), error);

  auto d4 = build_delta<F>(4);
  REQUIRE(std::string(d4.spec.variant_name()) == "delta-even");
  REQUIRE(d4.source == make_grassmannian<F>(VarietyKind::orthogonal, 2, 8));
  REQUIRE(d4.target == make_grassmannian<F>(VarietyKind::ordinary, 2, 8));

  auto sm = make_spin_module<F>(4);
  const int parity = support_parity(4, 0);
  Rng rng(23);
  for (int t = 0; t < 5; ++t) {
    auto p = random_point(d4.source, rng);
    Subspace<F> img = d4.apply_space(p.space);
    REQUIRE(img.dim() == 2);
    // the projective points of the image line are exactly the half-spin
    // coordinates of the component-0 maximal isotropic spaces over p
    std::set<Key> expected;
    for (const auto& w : detail::isotropic_extensions(*d4.source.form, p.space, 4))
      if (spinor_component(*d4.source.form, w) == 0)
        expected.insert(
            ProjectiveVector<F>::of(half_coords(sm, pure_spinor(sm, w).coords, parity)).key());
    REQUIRE(expected.size() == 4);
    std::set<Key> got;
    for_each_projective_vector<F>(2, [&](const std::vector<F>& c) {
      got.insert(ProjectiveVector<F>::of(mat_vec_row(c, img.basis)).key());
    });
    REQUIRE(got == expected);
  }
}

TEST_CASE("odd-space pencil map: injective and linear at the smallest size", "[slow]") {
  using F = Gf<3>;
  auto d = build_delta_odd<F>(4);
  REQUIRE(std::string(d.spec.variant_name()) == "delta-odd");
  REQUIRE(d.stages.size() == 2);
  REQUIRE(d.source == make_grassmannian<F>(VarietyKind::orthogonal, 2, 7));
  REQUIRE(d.target == make_grassmannian<F>(VarietyKind::ordinary, 2, 8));

  auto chk = verify_embedding(d);
  REQUIRE(chk.points == 3640);
  REQUIRE(chk.injective);
  REQUIRE(is_linear(d).linear);

  Rng rng(17);
  auto eq = equivariance_witness(d, 2, rng);
  REQUIRE(eq.status == WitnessStatus::verified);
}

TEST_CASE("composition: identity neutrality, matching formulas, conjunction") {
  using F = Gf<3>;
  auto gs = make_grassmannian<F>(VarietyKind::symplectic, 2, 4);
  auto tau = build_tautological(gs);

  auto mismatch = build_duality(make_grassmannian<F>(VarietyKind::ordinary, 1, 3));
  REQUIRE_THROWS_AS(compose(tau, mismatch), error);

  auto with_id = compose(tau, identity_extension(tau.target));
  for (const auto& p : enumerate_points(gs))
    REQUIRE(with_id.apply_space(p.space) == tau.apply_space(p.space));

  // form-forget, then extend, then re-embed isotropically: a three-stage chain
  Mat<F> nu = coordinate_inclusion<F>(4, 6, {0, 1, 2, 3});
  auto sigma = build_standard_extension<F>(tau.target,
                                           make_grassmannian<F>(VarietyKind::ordinary, 3, 6), nu,
                                           Subspace<F>::span_of(6, {unit<F>(6, 4)}));
  Mat<F> f = coordinate_inclusion<F>(6, 12, {0, 1, 2, 3, 4, 5});
  auto iota = build_isotropic_extension<F>(
      sigma.target, make_grassmannian<F>(VarietyKind::orthogonal, 3, 12),
      Subspace<F>::from_matrix(12, f), f);
  auto chain = compose(compose(tau, sigma), iota);
  REQUIRE(std::string(chain.spec.variant_name()) == "composite");
  REQUIRE(std::get<CompositeSpec<F>>(chain.spec.v).parts.size() == 3);
  REQUIRE(chain.stages.size() == 3);

  // pointwise agreement with the direct formula
  Mat<F> direct = nu * f;
  Subspace<F> wpart = apply_linear(Subspace<F>::span_of(6, {unit<F>(6, 4)}), f);
  for (const auto& p : enumerate_points(gs))
    REQUIRE(chain.apply_space(p.space) == sum(apply_linear(p.space, direct), wpart));

  auto chk = verify_embedding(chain);
  REQUIRE(chk.points == 40);
  REQUIRE(chk.injective);
  REQUIRE(is_linear(chain).linear);  // every stage is linear, so the chain is

  auto rep = pullback_fiber_shape(chain);
  REQUIRE(rep.shape == FiberShape::tautological_type);
  REQUIRE_FALSE(rep.dualized);
  REQUIRE(rep.recovered.has_value());
  REQUIRE(*rep.recovered == direct);
  REQUIRE(rep.constant_part == wpart);
}

TEST_CASE("composition: dualized stage is detected in the fiber report") {
  using F = Gf<3>;
  auto gs = make_grassmannian<F>(VarietyKind::symplectic, 2, 4);
  auto tau = build_tautological(gs);
  Mat<F> nu = coordinate_inclusion<F>(4, 6, {0, 1, 2, 3});
  auto sigma_d = build_standard_extension<F>(
      tau.target, make_grassmannian<F>(VarietyKind::ordinary, 3, 6), nu,
      Subspace<F>::span_of(6, {unit<F>(6, 4)}), true);
  auto psi = compose(tau, sigma_d);
  REQUIRE(verify_embedding(psi).injective);
  REQUIRE(is_linear(psi).linear);
  auto rep = pullback_fiber_shape(psi);
  REQUIRE(rep.shape == FiberShape::tautological_type);
  REQUIRE(rep.dualized);
  REQUIRE(rep.recovered.has_value());
  for (const auto& p : enumerate_points(gs))
    REQUIRE(psi.apply_space(p.space) ==
            sum(apply_linear(p.space.ann(), *rep.recovered), rep.constant_part));
}

TEST_CASE("fiber shapes: pivoting hyperplanes into a symplectic space") {
  using F = Gf<3>;
  auto g13 = make_grassmannian<F>(VarietyKind::ordinary, 1, 3);
  auto dual = build_duality(g13);
  Mat<F> f = coordinate_inclusion<F>(3, 6, {0, 1, 2});
  auto iota = build_isotropic_extension<F>(
      dual.target, make_grassmannian<F>(VarietyKind::symplectic, 2, 6),
      Subspace<F>::from_matrix(6, f), f);
  auto phi = compose(dual, iota);
  REQUIRE(verify_embedding(phi).injective);
  REQUIRE(is_linear(phi).linear);

  auto rep = pullback_fiber_shape(phi);
  REQUIRE(rep.shape == FiberShape::hyperplane_complement_type);
  REQUIRE(rep.dualized);
  REQUIRE(rep.constant_part.dim() == 0);

  // the fibers sweep the hyperplanes of a fixed 3-space inside the target
  Subspace<F> span = Subspace<F>::zero(6);
  for (const auto& p : enumerate_points(g13)) span = sum(span, phi.apply_space(p.space));
  REQUIRE(span.dim() == 3);
}

TEST_CASE("hand-assembled maps: the canonical projective image passes, a squaring map fails") {
  using F = Gf<3>;

  // points of G(2, V_4) sent to their projective coordinates, as a map of
  // varieties into the big projective space
  auto g24 = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  EmbeddingMap<F> pi;
  pi.source = g24;
  pi.target = make_grassmannian<F>(VarietyKind::ordinary, 1, 6);
  pi.spec = EmbeddingSpec<F>{TautologicalSpec{}};
  pi.fn = [](const Subspace<F>& u) {
    return Subspace<F>::span_of(6, {pluecker_of_space(u).coords});
  };
  REQUIRE(verify_embedding(pi).injective);
  REQUIRE(is_linear(pi).linear);

  // coordinate squaring on a projective line lands on a conic
  EmbeddingMap<F> ver;
  ver.source = make_grassmannian<F>(VarietyKind::ordinary, 1, 2);
  ver.target = make_grassmannian<F>(VarietyKind::ordinary, 1, 3);
  ver.spec = EmbeddingSpec<F>{TautologicalSpec{}};
  ver.fn = [](const Subspace<F>& u) {
    const F x = u.basis.at(0, 0), y = u.basis.at(0, 1);
    return Subspace<F>::span_of(3, {std::vector<F>{x * x, x * y, y * y}});
  };
  auto lin = is_linear(ver);
  REQUIRE_FALSE(lin.linear);
  REQUIRE(lin.witness_span == 3);
  REQUIRE_THROWS_AS(pullback_fiber_shape(ver), error);  // defined for linear maps only

  // a constant map is caught as a collision, with the witness pair recorded
  EmbeddingMap<F> con;
  con.source = ver.source;
  con.target = ver.source;
  con.spec = EmbeddingSpec<F>{TautologicalSpec{}};
  con.fn = [](const Subspace<F>&) { return Subspace<F>::span_of(2, {unit<F>(2, 0)}); };
  auto chk = verify_embedding(con);
  REQUIRE(chk.points == 4);
  REQUIRE_FALSE(chk.injective);
  REQUIRE(chk.collision.has_value());
}

TEST_CASE("equivariance witnesses across the symmetry kinds") {
  using F = Gf<3>;
  Rng rng(101);

  // symplectic source, trivial block: random symplectic elements act the same
  // way on both sides of the form-forgetting inclusion
  auto tau = build_tautological(make_grassmannian<F>(VarietyKind::symplectic, 2, 4));
  auto eq1 = equivariance_witness(tau, 3, rng);
  REQUIRE(eq1.status == WitnessStatus::verified);

  // orthogonal source with a strict extension: reflections are transported
  auto src = make_grassmannian<F>(VarietyKind::orthogonal, 1, 5);
  auto tgt = make_grassmannian<F>(VarietyKind::orthogonal, 2, 9);
  auto phi = build_standard_extension<F>(
      src, tgt, standard_form_inclusion<F>(*src.form, *tgt.form),
      Subspace<F>::span_of(9, {unit<F>(9, 2)}));
  auto eq2 = equivariance_witness(phi, 2, rng);
  REQUIRE(eq2.status == WitnessStatus::verified);

  // duality twist: inverse-transpose block
  auto eq3 = equivariance_witness(build_duality(make_grassmannian<F>(VarietyKind::ordinary, 2, 4)),
                                  3, rng);
  REQUIRE(eq3.status == WitnessStatus::verified);
}

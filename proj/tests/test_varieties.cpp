#include <catch2/catch_amalgamated.hpp>
#include <map>
#include <set>

#include "grasmap/grassmannian.hpp"

using namespace grasmap;

namespace {

// Brute-force oracle: filter all m-subspaces by isotropy and component.
template <class K>
u64 oracle_count(const GrassmannianDesc<K>& x) {
  u64 c = 0;
  for_each_subspace<K>(x.n, x.m, [&](const Subspace<K>& s) {
    if (is_point_of(x, s)) ++c;
  });
  return c;
}

}  // namespace

TEST_CASE("descriptor construction and flags") {
  auto g24 = make_grassmannian<Gf<2>>(VarietyKind::ordinary, 2, 4);
  REQUIRE(!g24.spinor_flag());
  REQUIRE(!g24.excluded_flag());
  REQUIRE(variety_dimension(g24) == 4);

  auto go26 = make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 2, 6);
  REQUIRE(go26.excluded_flag());
  REQUIRE_THROWS_AS(enumerate_points(go26), error);
  REQUIRE_THROWS_AS(point_count(go26), error);

  REQUIRE_THROWS_AS(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 3, 4), error);
  REQUIRE_THROWS_AS(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 1, 5), error);
  REQUIRE_THROWS_AS(make_grassmannian<Gf<2>>(VarietyKind::orthogonal, 1, 4), error);
  REQUIRE_THROWS_AS(make_grassmannian<Gf<3>>(VarietyKind::ordinary, 4, 4), error);
  REQUIRE_THROWS_AS(make_grassmannian<Gf<3>>(VarietyKind::ordinary, 2, 5, 0), error);

  auto spin6 = make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 6, 1);
  REQUIRE(spin6.spinor_flag());
  REQUIRE(spin6.component == 1);
  auto spin6d = make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 6);
  REQUIRE(spin6d.component == 0);  // default component
  auto go37 = make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 7);
  REQUIRE(go37.spinor_flag());
  REQUIRE(!go37.component.has_value());
}

TEST_CASE("descriptor string round trip") {
  auto d = parse_descriptor_string("GO:3:6:1");
  REQUIRE(d.kind == VarietyKind::orthogonal);
  REQUIRE(d.m == 3);
  REQUIRE(d.n == 6);
  REQUIRE(d.component == 1);
  REQUIRE(descriptor_string(d) == "GO:3:6:1");
  REQUIRE(descriptor_string(parse_descriptor_string("GS:2:6")) == "GS:2:6");
  REQUIRE_THROWS_AS(parse_descriptor_string("GX:2:6"), error);
  REQUIRE_THROWS_AS(parse_descriptor_string("GO:2"), error);
  REQUIRE_THROWS_AS(parse_descriptor_string("GO:a:6"), error);
}

TEST_CASE("point counts match brute-force oracle and closed form") {
  auto check = [](auto x, u64 expect) {
    REQUIRE(point_count(x) == expect);
    REQUIRE(oracle_count(x) == expect);
    auto pts = enumerate_points(x);
    REQUIRE(pts.size() == expect);
    // sorted lexicographically, no duplicates
    for (size_t i = 1; i < pts.size(); ++i) REQUIRE(lex_less(pts[i - 1].space, pts[i].space));
    for (const auto& p : pts) REQUIRE(is_point_of(x, p.space));
  };
  check(make_grassmannian<Gf<2>>(VarietyKind::ordinary, 1, 3), 7);
  check(make_grassmannian<Gf<2>>(VarietyKind::ordinary, 2, 4), 35);
  check(make_grassmannian<Gf<2>>(VarietyKind::symplectic, 1, 4), 15);
  check(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 1, 5), 40);
  check(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 1, 6), 130);
  check(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 2, 4), 40);
  check(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 6, 0), 40);
  check(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 6, 1), 40);
  check(make_grassmannian<Gf<5>>(VarietyKind::orthogonal, 2, 4, 0), 6);
  check(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 2, 6), 3640);
  check(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 2, 7), 3640);

  // low-dimensional coincidence: |GS(2,V_4)| = |GO(1,V_5)|
  REQUIRE(point_count(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 2, 4)) ==
          point_count(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 1, 5)));
}

TEST_CASE("plucker coordinates") {
  using F = Gf<2>;
  auto x = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto pts = enumerate_points(x);
  REQUIRE(pts.size() == 35);

  // coordinate subspace span(e1,e2): single 1 at subset {0,1}
  auto e12 = Subspace<F>::span_of(4, {{F(1), F(0), F(0), F(0)}, {F(0), F(1), F(0), F(0)}});
  auto pv = pluecker_of_space(e12);
  REQUIRE(pv.coords == std::vector<F>({F(1), F(0), F(0), F(0), F(0), F(0)}));

  // injectivity
  std::set<std::vector<F>> images;
  for (const auto& p : pts) images.insert(pluecker(p).coords);
  REQUIRE(images.size() == 35);

  // Plücker quadric p12 p34 - p13 p24 + p14 p23 = 0 over GF(3)
  using F3 = Gf<3>;
  auto x3 = make_grassmannian<F3>(VarietyKind::ordinary, 2, 4);
  for (const auto& p : enumerate_points(x3)) {
    auto c = pluecker(p).coords;
    REQUIRE((c[0] * c[5] - c[1] * c[4] + c[2] * c[3]).is_zero());
  }

  // spinor descriptors refuse the Plücker map
  auto sp = make_grassmannian<F3>(VarietyKind::orthogonal, 3, 6, 0);
  auto spts = enumerate_points(sp);
  REQUIRE_THROWS_AS(pluecker(spts[0]), error);
}

TEST_CASE("Klein correspondence: G(2,V_4) to GO(1,V_6) over GF(3)") {
  using F = Gf<3>;
  auto g = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto q = make_grassmannian<F>(VarietyKind::orthogonal, 1, 6);
  auto gp = enumerate_points(g);
  auto qp = enumerate_points(q);
  REQUIRE(gp.size() == qp.size());

  // linear change taking the Plücker quadric to the standard split form:
  // (c0..c5) = (p12,p13,p14,p23,p24,p34) -> (c0, c1, c2, c5, -c4, c3)
  auto to_split = [](const std::vector<F>& c) {
    return std::vector<F>{c[0], c[1], c[2], c[5], -c[4], c[3]};
  };
  std::set<Key> quadric_keys;
  for (const auto& p : qp) quadric_keys.insert(p.space.key());
  std::vector<std::vector<F>> images;
  std::set<Key> image_keys;
  for (const auto& p : gp) {
    auto y = to_split(pluecker(p).coords);
    REQUIRE(q.form->eval(y, y).is_zero());
    image_keys.insert(Subspace<F>::span_of(6, {y}).key());
    images.push_back(y);
  }
  REQUIRE(image_keys == quadric_keys);  // bijection onto the quadric

  // incidence transfer: lines of P^3 meet iff images pair to zero
  for (size_t i = 0; i < gp.size(); ++i)
    for (size_t j = i + 1; j < gp.size(); ++j) {
      bool meet = intersect(gp[i].space, gp[j].space).dim() == 1;
      bool orth = q.form->eval(images[i], images[j]).is_zero();
      REQUIRE(meet == orth);
    }
}

TEST_CASE("lines through points: pencil counts") {
  using F = Gf<2>;
  // P^2: three lines through each point
  auto p2 = make_grassmannian<F>(VarietyKind::ordinary, 1, 3);
  for (const auto& p : enumerate_points(p2)) {
    auto ls = lines_through(p);
    REQUIRE(ls.size() == 3);
    for (const auto& l : ls) {
      auto pts = line_points(l);
      REQUIRE(pts.size() == 3);  // q+1
      bool has = false;
      for (const auto& s : pts) has |= s == p.space;
      REQUIRE(has);
    }
  }
  // G(2,V_4): nine lines through each point
  auto g24 = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto pts = enumerate_points(g24);
  for (size_t i = 0; i < 5; ++i) REQUIRE(lines_through(pts[i]).size() == 9);
}

TEST_CASE("line_through verdicts") {
  using F = Gf<3>;
  auto g = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto parent = std::make_shared<const GrassmannianDesc<F>>(g);
  auto pt = [&](std::vector<std::vector<F>> rows) {
    return GrassPoint<F>{parent, Subspace<F>::span_of(4, rows)};
  };
  auto p = pt({{F(1), F(0), F(0), F(0)}, {F(0), F(1), F(0), F(0)}});
  auto q = pt({{F(0), F(0), F(1), F(0)}, {F(0), F(0), F(0), F(1)}});
  REQUIRE(!line_through(p, q).has_value());  // intersection 0
  auto r = pt({{F(1), F(0), F(0), F(0)}, {F(0), F(0), F(1), F(0)}});
  auto l = line_through(p, r);
  REQUIRE(l.has_value());
  REQUIRE(l->lower == intersect(p.space, r.space));
  REQUIRE(*l->upper == sum(p.space, r.space));
  auto lp = line_points(*l);
  REQUIRE(lp.size() == 4);  // q+1
  // lifted Plücker vectors of a full pencil span exactly 2 dimensions
  std::vector<ProjectiveVector<F>> lift;
  for (const auto& s : lp) lift.push_back(pluecker_of_space(s));
  REQUIRE(projective_span_dim(lift) == 2);
}

TEST_CASE("orthogonal non-maximal lines need isotropic join") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::orthogonal, 2, 7);
  auto pts = enumerate_points(x);
  int with_line = 0, without = 0;
  for (size_t j = 1; j < 400; ++j) {
    if (intersect(pts[0].space, pts[j].space).dim() != 1) continue;
    auto l = line_through(pts[0], pts[j]);
    bool join_iso = x.form->is_isotropic(sum(pts[0].space, pts[j].space));
    REQUIRE(l.has_value() == join_iso);
    if (l) {
      ++with_line;
      auto lp = line_points(*l);
      REQUIRE(lp.size() == 4);
      std::vector<ProjectiveVector<F>> lift;
      for (const auto& s : lp) lift.push_back(pluecker_of_space(s));
      REQUIRE(projective_span_dim(lift) == 2);
    } else {
      ++without;
    }
  }
  REQUIRE(with_line > 0);
  REQUIRE(without > 0);
}

TEST_CASE("symplectic pencils are fully isotropic") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::symplectic, 2, 6);
  auto pts = enumerate_points(x);
  int found = 0;
  for (size_t j = 1; j < 300; ++j) {
    if (intersect(pts[0].space, pts[j].space).dim() != 1) continue;
    auto l = line_through(pts[0], pts[j]);
    REQUIRE(l.has_value());  // every meeting pair is collinear for symplectic
    REQUIRE(line_points(*l).size() == 4);
    ++found;
  }
  REQUIRE(found > 0);
  // lines_through agrees with pairwise collinearity on a sample point
  auto ls = lines_through(pts[0]);
  std::set<std::pair<Key, Key>> idents;
  for (const auto& l : ls) {
    REQUIRE(line_points(l).size() == 4);
    idents.insert(l.ident());
  }
  REQUIRE(idents.size() == ls.size());
}

TEST_CASE("maximal-isotropic even lines are keyed by the meet") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::orthogonal, 3, 6, 0);
  auto pts = enumerate_points(x);
  REQUIRE(pts.size() == 40);
  // component parity: within a component intersections have dims {1, 3} only
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      int d = intersect(pts[i].space, pts[j].space).dim();
      REQUIRE((d == 1 || d == 3));
    }
  auto other = enumerate_points(make_grassmannian<F>(VarietyKind::orthogonal, 3, 6, 1));
  for (size_t i = 0; i < 10; ++i)
    for (size_t j = 0; j < 10; ++j) {
      int d = intersect(pts[i].space, other[j].space).dim();
      REQUIRE((d == 0 || d == 2));
    }

  auto l = line_through(pts[0], pts[1]);
  if (intersect(pts[0].space, pts[1].space).dim() == 1) {
    REQUIRE(l.has_value());
  }
  int lines_found = 0;
  for (size_t j = 1; j < pts.size(); ++j) {
    auto lj = line_through(pts[0], pts[j]);
    if (!lj) continue;
    ++lines_found;
    REQUIRE(!lj->upper.has_value());
    REQUIRE(lj->lower.dim() == 1);
    auto lp = line_points(*lj);
    REQUIRE(lp.size() == 4);  // q+1 points, all in the component
    for (const auto& s : lp) {
      REQUIRE(is_point_of(x, s));
      REQUIRE(s.contains(lj->lower));
    }
  }
  REQUIRE(lines_found > 0);
  // lines through a fixed point: one per 1-dim subspace of it
  REQUIRE(lines_through(pts[0]).size() == 13);  // [3 choose 1]_3
}

TEST_CASE("maximal-isotropic odd lines form conic pencils") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::orthogonal, 2, 5);
  REQUIRE(x.spinor_flag());
  auto pts = enumerate_points(x);
  REQUIRE(pts.size() == point_count(x));
  int found = 0;
  for (size_t j = 1; j < pts.size() && found < 5; ++j) {
    auto l = line_through(pts[0], pts[j]);
    if (!l) continue;
    ++found;
    auto lp = line_points(*l);
    REQUIRE(lp.size() == 4);  // q+1 isotropic extensions of the meet
    for (const auto& s : lp) REQUIRE(s.contains(l->lower));
    // under Plücker the pencil is a conic: lifted span is 3, not 2
    std::vector<ProjectiveVector<F>> lift;
    for (const auto& s : lp) lift.push_back(pluecker_of_space(s));
    REQUIRE(projective_span_dim(lift) == 3);
  }
  REQUIRE(found > 0);
}

TEST_CASE("line graph of G(2,V_5) over GF(2) is connected with small diameter") {
  using F = Gf<2>;
  auto x = make_grassmannian<F>(VarietyKind::ordinary, 2, 5);
  auto pts = enumerate_points(x);
  REQUIRE(pts.size() == 155);
  std::vector<int> dist(pts.size(), -1);
  std::vector<size_t> queue = {0};
  dist[0] = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    size_t i = queue[head];
    for (size_t j = 0; j < pts.size(); ++j) {
      if (dist[j] >= 0 || intersect(pts[i].space, pts[j].space).dim() != 1) continue;
      dist[j] = dist[i] + 1;
      queue.push_back(j);
    }
  }
  int diameter = 0;
  for (int d : dist) {
    REQUIRE(d >= 0);  // connected
    diameter = std::max(diameter, d);
  }
  REQUIRE(diameter <= x.m + 1);
}

TEST_CASE("tangent dimensions at the standard point") {
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::ordinary, 2, 4)) == 4);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 1, 5)) == 3);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 1, 6)) == 4);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 2, 4)) == 3);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 3, 6)) == 6);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::symplectic, 2, 6)) == 7);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 2, 7)) == 7);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 2, 8)) == 9);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 3, 6, 0)) == 3);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<3>>(VarietyKind::orthogonal, 4, 8, 0)) == 6);
  REQUIRE(tangent_dimension(make_grassmannian<Gf<5>>(VarietyKind::orthogonal, 3, 7)) == 6);
  // rational descriptors support the dimension computation too
  REQUIRE(tangent_dimension(make_grassmannian<Rat>(VarietyKind::symplectic, 2, 6)) == 7);
}

TEST_CASE("projective image spans") {
  using F = Gf<3>;
  // Plücker image of G(2,V_4) spans all of Lambda^2: dim 6
  auto g = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  std::vector<ProjectiveVector<F>> im;
  for (const auto& p : enumerate_points(g)) im.push_back(pluecker(p));
  REQUIRE(projective_span_dim(im) == 6);
  // symplectic image misses the contraction direction: dim 5
  auto s = make_grassmannian<F>(VarietyKind::symplectic, 2, 4);
  im.clear();
  for (const auto& p : enumerate_points(s)) im.push_back(pluecker(p));
  REQUIRE(projective_span_dim(im) == 5);
}

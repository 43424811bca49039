#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <set>

#include "grasmap/maxspaces.hpp"

using namespace grasmap;

namespace {

template <class K>
IntersectionVerdict<K> classify_realized(const MaxSpace<K>& ms) {
  auto emb = make_ambient_embedder(*ms.parent);
  return detail::classify_point_set(emb, realize(ms));
}

template <class K>
u64 count_tag(const std::vector<MaxSpace<K>>& spaces, FamilyTag t) {
  u64 c = 0;
  for (const auto& ms : spaces) c += ms.tag == t;
  return c;
}

template <class K>
std::set<Key> key_set(const std::vector<Subspace<K>>& pts) {
  std::set<Key> s;
  for (const auto& p : pts) s.insert(p.key());
  return s;
}

// Every pair of realized points must be collinear with the whole line inside
// the realized set.
template <class K>
void check_linearly_closed(const MaxSpace<K>& ms, size_t pair_cap = 200) {
  auto pts = realize(ms);
  auto keys = key_set(pts);
  size_t checked = 0;
  for (size_t i = 0; i < pts.size() && checked < pair_cap; ++i)
    for (size_t j = i + 1; j < pts.size() && checked < pair_cap; ++j, ++checked) {
      GrassPoint<K> p{ms.parent, pts[i]};
      GrassPoint<K> q{ms.parent, pts[j]};
      auto line = line_through(p, q);
      REQUIRE(line.has_value());
      for (const auto& r : line_points(*line)) REQUIRE(keys.count(r.key()) == 1);
    }
}

u64 tally_of(const CensusReport& rep, const char* fa, const char* fb, const char* shape) {
  auto it = rep.tally.find({fa, fb});
  if (it == rep.tally.end()) return 0;
  auto jt = it->second.find(shape);
  return jt == it->second.end() ? 0 : jt->second;
}

std::vector<std::string> shapes_of(const CensusReport& rep, const char* fa, const char* fb) {
  std::vector<std::string> out;
  auto it = rep.tally.find({fa, fb});
  if (it == rep.tally.end()) return out;
  for (const auto& [shape, cnt] : it->second)
    if (cnt > 0) out.push_back(shape);
  return out;
}

}  // namespace

TEST_CASE("ordinary families: enumeration, realization, spaces through a point") {
  using F = Gf<2>;
  auto x = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto spaces = enumerate_max_spaces(x);
  REQUIRE(spaces.size() == 30);
  REQUIRE(count_tag(spaces, FamilyTag::sub_space) == 15);
  REQUIRE(count_tag(spaces, FamilyTag::super_space) == 15);

  for (const auto& ms : spaces) {
    auto pts = realize(ms);
    REQUIRE(pts.size() == 7);  // both families are planes over GF(2)
    for (const auto& p : pts) REQUIRE(is_point_of(x, p));
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::projective_space);
    REQUIRE(verdict.dim == 2);
  }

  // strict pairwise non-containment (maximality relative to each other)
  std::vector<std::set<Key>> keysets;
  for (const auto& ms : spaces) keysets.push_back(key_set(realize(ms)));
  for (size_t i = 0; i < keysets.size(); ++i)
    for (size_t j = 0; j < keysets.size(); ++j)
      if (i != j)
        REQUIRE(!std::includes(keysets[j].begin(), keysets[j].end(), keysets[i].begin(),
                               keysets[i].end()));

  auto pts = enumerate_points(x);
  auto through = spaces_through(pts.front());
  REQUIRE(count_tag(through, FamilyTag::sub_space) == 3);
  REQUIRE(count_tag(through, FamilyTag::super_space) == 3);
  std::set<std::array<Key, 2>> through_ids;
  for (const auto& ms : through) {
    through_ids.insert(ms.ident());
    auto keys = key_set(realize(ms));
    REQUIRE(keys.count(pts.front().space.key()) == 1);
  }
  // consistency with the global enumeration
  u64 found = 0;
  for (const auto& ms : spaces)
    if (key_set(realize(ms)).count(pts.front().space.key())) {
      REQUIRE(through_ids.count(ms.ident()) == 1);
      ++found;
    }
  REQUIRE(found == through.size());

  check_linearly_closed(spaces[0]);
  check_linearly_closed(spaces[20]);
}

TEST_CASE("ordinary census: exhaustive on G(2,4), sampled on G(2,5)") {
  using F = Gf<3>;
  auto rep = verify_intersection_table(make_grassmannian<F>(VarietyKind::ordinary, 2, 4));
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(rep.spaces == 80);
  // distinct hyperplane data always meet in dimension 2, so same-family
  // pairs always intersect in a point here
  REQUIRE(tally_of(rep, "sub", "sub", "point") == 780);
  REQUIRE(tally_of(rep, "super", "super", "point") == 780);
  REQUIRE(tally_of(rep, "sub", "super", "line") == 40 * 13);
  REQUIRE(tally_of(rep, "sub", "super", "empty") == 40 * 40 - 40 * 13);

  CensusOptions opt;
  opt.sample_pairs = 20000;
  opt.seed = 5;
  auto rep5 = verify_intersection_table(make_grassmannian<F>(VarietyKind::ordinary, 2, 5), opt);
  INFO(rep5.summary());
  REQUIRE(rep5.pass);
  REQUIRE(rep5.spaces == 1331);
  // in a 5-dimensional ambient space same-family data can be disjoint enough
  REQUIRE(tally_of(rep5, "sub", "sub", "empty") > 0);
  REQUIRE(tally_of(rep5, "sub", "sub", "point") > 0);
  REQUIRE(tally_of(rep5, "super", "super", "point") > 0);
  REQUIRE(tally_of(rep5, "sub", "super", "line") > 0);
}

TEST_CASE("symplectic: the Lagrangian grassmannian carries only line pencils") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::symplectic, 2, 4);
  auto spaces = enumerate_max_spaces(x);
  REQUIRE(spaces.size() == 40);
  for (const auto& ms : spaces) {
    REQUIRE(ms.tag == FamilyTag::super_space);
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::projective_space);
    REQUIRE(verdict.dim == 1);
    check_linearly_closed(ms);
  }
  auto rep = verify_intersection_table(x);
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(tally_of(rep, "super", "super", "point") == 240);
  REQUIRE(tally_of(rep, "super", "super", "empty") == 540);

  auto pts = enumerate_points(x);
  auto through = spaces_through(pts.front());
  REQUIRE(through.size() == 4);  // one pencil per hyperplane of the point
  for (const auto& ms : through) REQUIRE(ms.tag == FamilyTag::super_space);
}

TEST_CASE("symplectic census GS(2,6): family shapes and exhaustive tallies") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::symplectic, 2, 6);
  auto spaces = enumerate_max_spaces(x);
  REQUIRE(count_tag(spaces, FamilyTag::sub_space) == 1120);
  REQUIRE(count_tag(spaces, FamilyTag::super_space) == 364);

  // the super family is a projective space of dimension 2(n/2 - m) + 1
  for (const auto& ms : spaces) {
    if (ms.tag != FamilyTag::super_space) continue;
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::projective_space);
    REQUIRE(verdict.dim == 3);
    REQUIRE(verdict.size == 40);
    break;
  }
  for (const auto& ms : spaces) {
    if (ms.tag != FamilyTag::sub_space) continue;
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::projective_space);
    REQUIRE(verdict.dim == 2);
    break;
  }

  auto rep = verify_intersection_table(x);
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(rep.spaces == 1484);
  REQUIRE(tally_of(rep, "sub", "sub", "point") == 21840);
  REQUIRE(tally_of(rep, "super", "super", "point") == 21840);
  REQUIRE(tally_of(rep, "sub", "super", "line") == 14560);
  REQUIRE(shapes_of(rep, "sub", "super") == std::vector<std::string>{"empty", "line"});
}

TEST_CASE("orthogonal census GO(2,7): sub and quadric families, line cross-meets") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::orthogonal, 2, 7);
  auto spaces = enumerate_max_spaces(x);
  REQUIRE(count_tag(spaces, FamilyTag::sub_space) == 1120);
  REQUIRE(count_tag(spaces, FamilyTag::quadric_family) == 364);

  // family shapes: sub realizes a plane, quadric datum realizes a quadric
  // surface (40 points, too many for a plane, sitting on a quadric)
  for (const auto& ms : spaces) {
    if (ms.tag != FamilyTag::sub_space) continue;
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::projective_space);
    REQUIRE(verdict.dim == 2);
    check_linearly_closed(ms);
    break;
  }
  for (const auto& ms : spaces) {
    if (ms.tag != FamilyTag::quadric_family) continue;
    auto verdict = classify_realized(ms);
    REQUIRE(verdict.kind == ShapeKind::quadric_shape);
    REQUIRE(verdict.dim == 3);  // Q^{n-2m} with n=7, m=2
    REQUIRE(verdict.size == 40);
    break;
  }

  auto rep = verify_intersection_table(x);
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(rep.spaces == 1484);
  REQUIRE(tally_of(rep, "sub", "sub", "point") == 21840);
  REQUIRE(tally_of(rep, "quadric", "quadric", "point") == 21840);
  REQUIRE(tally_of(rep, "sub", "quadric", "line") == 14560);
  REQUIRE(shapes_of(rep, "sub", "quadric") == std::vector<std::string>{"empty", "line"});
}

TEST_CASE("quadric rulings: parity of meets between and within families") {
  using F = Gf<3>;

  // odd ambient: a single ruling family
  auto q3 = make_grassmannian<F>(VarietyKind::orthogonal, 1, 5);
  auto s3 = enumerate_max_spaces(q3);
  REQUIRE(count_tag(s3, FamilyTag::ruling_a) == 40);
  REQUIRE(count_tag(s3, FamilyTag::ruling_b) == 0);
  REQUIRE(count_tag(s3, FamilyTag::quadric_family) == 1);
  auto rep3 = verify_intersection_table(q3);
  INFO(rep3.summary());
  REQUIRE(rep3.pass);
  REQUIRE(tally_of(rep3, "quadric", "ruling-a", "line") == 40);
  REQUIRE(tally_of(rep3, "ruling-a", "ruling-a", "point") == 240);
  REQUIRE(tally_of(rep3, "ruling-a", "ruling-a", "empty") == 540);

  // even ambient: two families; same-family planes always meet in a point
  // (witt index 3 is odd), opposite families meet in a line or not at all
  auto q4 = make_grassmannian<F>(VarietyKind::orthogonal, 1, 6);
  auto s4 = enumerate_max_spaces(q4);
  REQUIRE(count_tag(s4, FamilyTag::ruling_a) == 40);
  REQUIRE(count_tag(s4, FamilyTag::ruling_b) == 40);
  auto rep4 = verify_intersection_table(q4);
  INFO(rep4.summary());
  REQUIRE(rep4.pass);
  REQUIRE(rep4.absences.empty());
  REQUIRE(shapes_of(rep4, "ruling-a", "ruling-a") == std::vector<std::string>{"point"});
  REQUIRE(shapes_of(rep4, "ruling-b", "ruling-b") == std::vector<std::string>{"point"});
  REQUIRE(shapes_of(rep4, "ruling-a", "ruling-b") ==
          std::vector<std::string>{"empty", "line"});
  REQUIRE(tally_of(rep4, "quadric", "ruling-a", "plane") == 40);
  REQUIRE(tally_of(rep4, "quadric", "ruling-b", "plane") == 40);

  auto pts = enumerate_points(q4);
  auto through = spaces_through(pts.front());
  REQUIRE(count_tag(through, FamilyTag::ruling_a) == 4);
  REQUIRE(count_tag(through, FamilyTag::ruling_b) == 4);
  REQUIRE(count_tag(through, FamilyTag::quadric_family) == 1);

  // a bigger odd quadric, exhaustively
  auto q5 = make_grassmannian<F>(VarietyKind::orthogonal, 1, 7);
  auto rep5 = verify_intersection_table(q5);
  INFO(rep5.summary());
  REQUIRE(rep5.pass);
  REQUIRE(rep5.spaces == 1121);
  REQUIRE(tally_of(rep5, "ruling-a", "ruling-a", "point") == 196560);
  REQUIRE(tally_of(rep5, "ruling-a", "ruling-a", "line") == 21840);
}

TEST_CASE("even spinor families at m=4: keys, tables, degenerate small cases") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::orthogonal, 4, 8, 0);
  auto spaces = enumerate_max_spaces(x);
  REQUIRE(count_tag(spaces, FamilyTag::spinor_pm1) == 1120);
  REQUIRE(count_tag(spaces, FamilyTag::spinor_p3) == 1120);
  // one family per opposite-component point, one per isotropic direction
  REQUIRE(count_tag(spaces, FamilyTag::spinor_pm1) ==
          point_count(make_grassmannian<F>(VarietyKind::orthogonal, 4, 8, 1)));
  REQUIRE(count_tag(spaces, FamilyTag::spinor_p3) ==
          point_count(make_grassmannian<F>(VarietyKind::orthogonal, 1, 8)));

  // both families realize 3-dimensional projective spaces in spinor coords
  for (FamilyTag t : {FamilyTag::spinor_pm1, FamilyTag::spinor_p3}) {
    for (const auto& ms : spaces) {
      if (ms.tag != t) continue;
      auto pts = realize(ms);
      REQUIRE(pts.size() == 40);
      for (const auto& p : pts) {
        REQUIRE(is_point_of(x, p));
        if (t == FamilyTag::spinor_pm1) REQUIRE(intersect(p, ms.datum).dim() == 3);
        if (t == FamilyTag::spinor_p3) REQUIRE(p.contains(ms.datum));
      }
      auto verdict = classify_realized(ms);
      REQUIRE(verdict.kind == ShapeKind::projective_space);
      REQUIRE(verdict.dim == 3);
      check_linearly_closed(ms, 60);
      break;
    }
  }

  CensusOptions opt;
  opt.max_spaces = 5000;
  opt.sample_pairs = 4000;
  opt.seed = 7;
  auto rep = verify_intersection_table(x, opt);
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(shapes_of(rep, "spinor-pm1", "spinor-pm1") ==
          std::vector<std::string>{"empty", "line"});
  REQUIRE(shapes_of(rep, "spinor-p3", "spinor-p3") == std::vector<std::string>{"empty", "line"});
  // at m=4 a point meet needs the joined datum to reach dimension m-1 = 3,
  // but two directions span at most 2; and the mixed pair can never be empty
  REQUIRE(shapes_of(rep, "spinor-pm1", "spinor-p3") ==
          std::vector<std::string>{"plane", "point"});

  // degenerate sizes: the whole variety is the single maximal space
  auto d3 = make_grassmannian<F>(VarietyKind::orthogonal, 3, 6, 1);
  auto s3 = enumerate_max_spaces(d3);
  REQUIRE(s3.size() == 1);
  REQUIRE(s3.front().tag == FamilyTag::spinor_p3);
  REQUIRE(realize(s3.front()).size() == point_count(d3));
  auto v3 = classify_realized(s3.front());
  REQUIRE(v3.kind == ShapeKind::projective_space);
  REQUIRE(v3.dim == 3);

  auto d2 = make_grassmannian<F>(VarietyKind::orthogonal, 2, 4, 0);
  auto s2 = enumerate_max_spaces(d2);
  REQUIRE(s2.size() == 1);
  REQUIRE(s2.front().tag == FamilyTag::spinor_pm1);
  auto v2 = classify_realized(s2.front());
  REQUIRE(v2.kind == ShapeKind::projective_space);
  REQUIRE(v2.dim == 1);
}

TEST_CASE("maximal odd orthogonal: families transported through the doubled space") {
  using F = Gf<3>;

  // GO(2,5) is a 3-dimensional projective space in its minimal embedding;
  // its single transported entry realizes the whole variety
  auto x5 = make_grassmannian<F>(VarietyKind::orthogonal, 2, 5);
  auto s5 = enumerate_max_spaces(x5);
  REQUIRE(s5.size() == 1);
  REQUIRE(s5.front().datum.ambient == 6);  // data live in the doubled space
  auto pts5 = realize(s5.front());
  REQUIRE(pts5.size() == point_count(x5));
  for (const auto& p : pts5) REQUIRE(is_point_of(x5, p));
  auto v5 = classify_realized(s5.front());
  REQUIRE(v5.kind == ShapeKind::projective_space);
  REQUIRE(v5.dim == 3);

  auto x7 = make_grassmannian<F>(VarietyKind::orthogonal, 3, 7);
  auto s7 = enumerate_max_spaces(x7);
  REQUIRE(s7.size() == 2240);
  REQUIRE(count_tag(s7, FamilyTag::spinor_pm1) == 1120);
  REQUIRE(count_tag(s7, FamilyTag::spinor_p3) == 1120);
  for (const auto& ms : s7) REQUIRE(ms.datum.ambient == 8);

  // an entry keyed by a direction inside the embedded hyperplane is the
  // classical pencil of isotropic 3-spaces through a fixed direction
  auto iso = make_odd_even_iso<F>(4, 0);
  Subspace<F> hyper = Subspace<F>::from_matrix(8, iso.embed);
  const MaxSpace<F>* pencil = nullptr;
  for (const auto& ms : s7)
    if (ms.tag == FamilyTag::spinor_p3 && hyper.contains(ms.datum.basis.row(0))) {
      pencil = &ms;
      break;
    }
  REQUIRE(pencil != nullptr);
  auto pen_pts = realize(*pencil);
  REQUIRE(pen_pts.size() == 40);
  for (const auto& p : pen_pts) {
    REQUIRE(is_point_of(x7, p));
    REQUIRE(odd_to_even_point(iso, p).contains(pencil->datum));
  }
  // entries keyed by directions outside the hyperplane have no flag
  // description downstairs but still realize subsets of the variety
  const MaxSpace<F>* external = nullptr;
  for (const auto& ms : s7)
    if (ms.tag == FamilyTag::spinor_p3 && !hyper.contains(ms.datum.basis.row(0))) {
      external = &ms;
      break;
    }
  REQUIRE(external != nullptr);
  auto ext_pts = realize(*external);
  REQUIRE(ext_pts.size() == 40);
  for (const auto& p : ext_pts) REQUIRE(is_point_of(x7, p));
  auto ve = classify_realized(*external);
  REQUIRE(ve.kind == ShapeKind::projective_space);
  REQUIRE(ve.dim == 3);

  CensusOptions opt;
  opt.max_spaces = 5000;
  opt.sample_pairs = 1500;
  opt.seed = 7;
  auto rep = verify_intersection_table(x7, opt);
  INFO(rep.summary());
  REQUIRE(rep.pass);
  REQUIRE(shapes_of(rep, "spinor-pm1", "spinor-pm1") ==
          std::vector<std::string>{"empty", "line"});

  // spaces through a point transport back, and each contains the point
  auto pt = enumerate_points(x7).front();
  auto through = spaces_through(pt);
  REQUIRE(!through.empty());
  for (const auto& ms : through) {
    auto keys = key_set(realize(ms));
    REQUIRE(keys.count(pt.space.key()) == 1);
  }
}

TEST_CASE("classification and flag rules agree on chosen pairs with witnesses") {
  using F = Gf<3>;
  auto x = make_grassmannian<F>(VarietyKind::ordinary, 2, 4);
  auto spaces = enumerate_max_spaces(x);
  const MaxSpace<F>*a = nullptr, *b = nullptr;
  for (const auto& ms : spaces) {
    if (ms.tag != FamilyTag::sub_space) continue;
    if (!a) {
      a = &ms;
    } else {
      b = &ms;
      break;
    }
  }
  auto got = classify_intersection(*a, *b);
  auto want = flag_rule_prediction(*a, *b);
  REQUIRE(got.kind == ShapeKind::point);
  REQUIRE(got.same_shape(want));
  REQUIRE(*got.witness == *want.witness);
  REQUIRE(got.witness->dim() == 2);
  REQUIRE(*got.witness == intersect(a->datum, b->datum));
}

TEST_CASE("constructor validation rejects malformed data") {
  using F = Gf<3>;
  auto gs = std::make_shared<const GrassmannianDesc<F>>(
      make_grassmannian<F>(VarietyKind::symplectic, 2, 4));
  // Lagrangian: no sub family
  REQUIRE_THROWS_AS(
      make_max_space<F>(gs, FamilyTag::sub_space, Subspace<F>::span_of(4, {{F(1), F(0), F(0), F(0)}, {F(0), F(1), F(0), F(0)}, {F(0), F(0), F(1), F(0)}})),
      error);
  // wrong datum dimension
  REQUIRE_THROWS_AS(make_max_space<F>(gs, FamilyTag::super_space,
                                      Subspace<F>::span_of(4, {{F(1), F(0), F(0), F(0)},
                                                               {F(0), F(1), F(0), F(0)}})),
                    error);
  // wrong family kind for the regime
  REQUIRE_THROWS_AS(
      make_max_space<F>(gs, FamilyTag::ruling_a, Subspace<F>::span_of(4, {{F(1), F(0), F(0), F(0)}})),
      error);

  auto go = std::make_shared<const GrassmannianDesc<F>>(
      make_grassmannian<F>(VarietyKind::orthogonal, 2, 7));
  // non-isotropic datum (e_1 + f_1 has nonzero square)
  std::vector<F> v(7);
  v[0] = F(1);
  v[3] = F(1);
  REQUIRE_THROWS_AS(make_max_space<F>(go, FamilyTag::quadric_family, Subspace<F>::span_of(7, {v})),
                    error);
  // co-datum outside the ruling regime
  std::vector<F> e1(7);
  e1[0] = F(1);
  REQUIRE_THROWS_AS(make_max_space<F>(go, FamilyTag::quadric_family,
                                      Subspace<F>::span_of(7, {e1}), Subspace<F>::zero(7)),
                    error);

  auto spin = std::make_shared<const GrassmannianDesc<F>>(
      make_grassmannian<F>(VarietyKind::orthogonal, 4, 8, 0));
  // a same-component datum is rejected for the opposite-point family
  auto same = enumerate_points(*spin).front().space;
  REQUIRE_THROWS_AS(make_max_space<F>(spin, FamilyTag::spinor_pm1, same), error);
}

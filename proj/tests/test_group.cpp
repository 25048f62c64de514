#include <doctest.h>

#include "hyperwalk/ball.hpp"
#include "hyperwalk/error.hpp"
#include "hyperwalk/group.hpp"
#include "hyperwalk/presentation.hpp"
#include "support.hpp"

using namespace hyperwalk;

namespace {

ModelPtr F2() { return make_model("free:2"); }
ModelPtr FPC23() { return make_model("fpc:2,3"); }

std::string canon(const ModelPtr& m, const std::string& w) { return m->format(m->parse(w)); }

}  // namespace

TEST_CASE("free group canonical form") {
  auto m = F2();
  CHECK(canon(m, "abBa") == "aa");
  CHECK(canon(m, "") == "e");
  CHECK(m->parse("").is_identity());
  CHECK(m->format(m->multiply(m->parse("ab"), m->parse("Ba"))) == "aa");
  CHECK(m->format(m->invert(m->parse("ab"))) == "BA");
  CHECK(m->invert(m->identity()).is_identity());
  CHECK(m->word_length(m->parse("abA")) == 3);
  CHECK(m->word_length(m->identity()) == 0);
  CHECK(m->format(m->power(m->parse("ab"), 2)) == "abab");
  CHECK(m->power(m->parse("ab"), 0).is_identity());
  CHECK(m->power(m->parse("ab"), 1) == m->parse("ab"));
}

TEST_CASE("free product of cyclics canonical form") {
  auto m = FPC23();
  CHECK(m->parse("ttt").is_identity());
  CHECK(m->format(m->multiply(m->parse("st"), m->parse("tt"))) == "s");
  CHECK(m->parse("ss").is_identity());
  CHECK(m->power(m->parse("t"), 3).is_identity());
  // t^-1 = t^2; the canonical exponent window (-3/2, 3/2] writes it as T
  CHECK(m->invert(m->parse("t")) == m->parse("tt"));
  CHECK(m->format(m->invert(m->parse("t"))) == "T");
  CHECK(m->word_length(m->parse("tt")) == 1);
  CHECK(m->word_length(m->parse("sts")) == 3);
}

TEST_CASE("unknown generator is rejected") {
  auto m = F2();
  CHECK_THROWS_AS(m->parse("ax"), Error);
  CHECK_THROWS_AS(make_model("free:0"), Error);
  CHECK_THROWS_AS(make_model("fpc:1"), Error);
  CHECK_THROWS_AS(make_model("nonsense"), Error);
}

TEST_CASE("elements of different models do not mix") {
  auto m1 = F2();
  auto m2 = F2();
  CHECK_THROWS_AS(m1->multiply(m1->parse("a"), m2->parse("b")), Error);
}

TEST_CASE("free reduction agrees with the Sanov representation") {
  auto m = F2();
  oracle::Gen gen(7);
  const std::vector<char> letters{'a', 'A', 'b', 'B'};
  for (int i = 0; i < 2000; ++i) {
    const auto w = gen.word(letters, 40);
    const auto x = m->parse(w);
    // canonical word is the stack reduction and represents the same matrix
    CHECK(m->format(x) == oracle::show(oracle::reduce(w)));
    CHECK(oracle::sanov(oracle::reduce(m->format(x))) == oracle::sanov(w));
    CHECK(m->parse(m->format(x)) == x);  // idempotent
  }
}

TEST_CASE("FPC(2,3) products agree with PSL(2,Z) matrices") {
  auto m = FPC23();
  oracle::Gen gen(11);
  const std::vector<char> letters{'s', 't', 'T'};
  for (int i = 0; i < 2000; ++i) {
    const auto u = gen.word(letters, 20);
    const auto v = gen.word(letters, 20);
    const auto x = m->multiply(m->parse(u), m->parse(v));
    CHECK(oracle::psl_equal(oracle::psl(m->format(x)), oracle::psl(u + v)));
    CHECK(m->parse(m->format(x)) == x);
    CHECK(m->multiply(x, m->invert(x)).is_identity());
    // identity iff the matrix is +-I
    CHECK(x.is_identity() == oracle::psl_identity(oracle::psl(u + v)));
  }
}

TEST_CASE("associativity and inverses on random triples") {
  for (const char* spec : {"free:2", "fpc:2,3", "fpc:2,3+1", "free:3"}) {
    auto m = make_model(spec);
    oracle::Gen gen(3);
    std::vector<char> letters;
    for (const auto& name : m->alphabet().names()) {
      letters.push_back(name);
      letters.push_back(static_cast<char>(std::toupper(name)));
    }
    for (int i = 0; i < 10000; ++i) {
      const auto x = m->parse(gen.word(letters, 12));
      const auto y = m->parse(gen.word(letters, 12));
      const auto z = m->parse(gen.word(letters, 12));
      REQUIRE(m->multiply(m->multiply(x, y), z) == m->multiply(x, m->multiply(y, z)));
      REQUIRE(m->multiply(x, m->invert(x)).is_identity());
    }
  }
}

TEST_CASE("free group ball sizes") {
  auto m = F2();
  CHECK(Ball::enumerate(m, 0)->size() == 1);
  CHECK(Ball::enumerate(m, 1)->size() == 5);
  CHECK(Ball::enumerate(m, 2)->size() == 17);
  for (int k = 1; k <= 3; ++k) {
    auto mk = make_model("free:" + std::to_string(k));
    for (int r = 0; r <= (k == 3 ? 5 : 8); ++r) {
      std::size_t expected = 1, sphere = 2 * k;
      for (int i = 1; i <= r; ++i, sphere *= 2 * k - 1) expected += sphere;
      CHECK(Ball::enumerate(mk, r)->size() == expected);
      CHECK(free_group_ball_size(k, r) == expected);
    }
  }
  CHECK(Ball::enumerate(m, 8)->size() == 13121);
}

TEST_CASE("ball agrees with the reduced-word enumeration and is shortlex") {
  auto ball = Ball::enumerate(F2(), 5);
  const auto words = oracle::free_ball(2, 5);
  REQUIRE(ball->size() == words.size());
  for (std::size_t i = 0; i < words.size(); ++i) CHECK(ball->model().format(ball->element(i)) == oracle::show(words[i]));
}

TEST_CASE("ball is closed under inversion and lengths are isometric") {
  for (const char* spec : {"free:2", "fpc:2,3"}) {
    auto ball = Ball::enumerate(make_model(spec), 6);
    const auto& m = ball->model();
    for (const auto& x : ball->elements()) {
      const auto xi = m.invert(x);
      REQUIRE(ball->contains(xi));
      CHECK(xi.length() == x.length());
    }
  }
}

TEST_CASE("triangle inequality over ball R=4") {
  for (const char* spec : {"free:2", "fpc:2,3"}) {
    auto ball = Ball::enumerate(make_model(spec), 4);
    const auto& m = ball->model();
    for (const auto& x : ball->elements()) {
      for (const auto& y : ball->elements()) {
        const int xy = m.word_length(m.multiply(x, y));
        CHECK(xy <= x.length() + y.length());
        CHECK(std::abs(x.length() - y.length()) <= m.word_length(m.multiply(x, m.invert(y))));
      }
    }
  }
}

TEST_CASE("FPC(2,3) sphere sizes by direct counting") {
  // Alternating words in s and t^{+-1}: sphere sizes 1, 3, 4, 6, 8, 12, ...
  auto ball = Ball::enumerate(FPC23(), 6);
  std::vector<int> sphere(7, 0);
  for (const auto& x : ball->elements()) ++sphere[static_cast<std::size_t>(x.length())];
  CHECK(sphere == std::vector<int>{1, 3, 4, 6, 8, 12, 16});
}

TEST_CASE("ball neighbor table matches multiplication") {
  auto ball = Ball::enumerate(FPC23(), 4);
  const auto& m = ball->model();
  for (std::size_t i = 0; i < ball->size(); ++i) {
    for (std::size_t slot = 0; slot < ball->edge_count(); ++slot) {
      const auto y = m.multiply(ball->element(i), m.generator(m.edge_letters()[slot]));
      const auto j = ball->neighbor(i, slot);
      if (j < 0) {
        CHECK(y.length() > 4);
      } else {
        CHECK(ball->element(static_cast<std::size_t>(j)) == y);
      }
    }
  }
}

TEST_CASE("ball guard and radius errors") {
  CHECK_THROWS_AS(Ball::enumerate(F2(), 10, 1000), Error);
  CHECK_THROWS_AS(Ball::enumerate(F2(), -1), Error);
}

// ---------------------------------------------------------------------------

TEST_CASE("surface group presentation is C'(1/6)") {
  const auto p = surface_presentation(2);
  REQUIRE(p.relators.size() == 1);
  CHECK(p.alphabet.format(p.relators[0]) == "abABcdCD");
  const auto rep = check_small_cancellation(p);
  CHECK(rep.satisfied);
  CHECK(rep.longest_piece == 1);
}

TEST_CASE("presentations failing C'(1/6) are rejected") {
  // commutator relator of Z^2 has pieces of length 1 in a relator of length 4
  const auto p = parse_presentation("rank 2\nabAB\n");
  CHECK_FALSE(check_small_cancellation(p).satisfied);
  CHECK_THROWS_AS(SmallCancellationModel::create(p, 3), Error);
}

TEST_CASE("presentation parsing") {
  const auto p = parse_presentation("# comment\nrank 3\nabcABC\n\n");
  CHECK(p.alphabet.rank() == 3);
  CHECK(p.relators.size() == 1);
  CHECK_THROWS_AS(parse_presentation("abAB\n"), Error);
  CHECK_THROWS_AS(parse_presentation("rank 2\nabxAB\n"), Error);
}

TEST_CASE("Dehn reduction") {
  const auto p = surface_presentation(2);
  DehnReducer dehn(p.relators);
  const auto& al = p.alphabet;
  CHECK(dehn.is_trivial(al.parse("abABcdCD")));
  CHECK(dehn.is_trivial(al.parse("cdCDabAB")));
  CHECK(dehn.is_trivial(al.parse("dcDCbaBA")));
  CHECK_FALSE(dehn.is_trivial(al.parse("abAB")));
  // more than half a relator is replaced by the shorter complement
  CHECK(dehn.reduce(al.parse("abABcd")).size() == 2);
}

TEST_CASE("surface group ball") {
  auto m = make_model("surface:2:4");
  CHECK(m->kind() == BackendKind::SmallCancellationBall);
  CHECK(m->validated_radius().value_or(-1) == 4);
  // no relator is shorter than 8, so up to radius 3 the ball is a tree
  CHECK(Ball::enumerate(m, 3)->size() == 1 + 8 + 56 + 392);
  CHECK(m->parse("abABcdCD").is_identity());
  CHECK(m->word_length(m->parse("abABcdC")) == 1);
  CHECK(m->parse("abABcdC") == m->parse("d"));
  CHECK(m->parse("abABc") == m->parse("dcD"));
  CHECK(m->word_length(m->parse("abABc")) == 3);
  CHECK_THROWS_AS(Ball::enumerate(m, 5), Error);
}

TEST_CASE("surface ball equality agrees with Dehn reduction on all pairs") {
  auto m = make_model("surface:2:3");
  auto ball = Ball::enumerate(m, 3);
  DehnReducer dehn(surface_presentation(2).relators);
  for (const auto& x : ball->elements()) {
    for (const auto& y : ball->elements()) {
      const bool same = dehn.is_trivial(concat(x.word(), y.word().formal_inverse()));
      REQUIRE(same == (x == y));
    }
  }
}

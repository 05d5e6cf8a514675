#include "allostery/induction.hpp"

#include "allostery/covers.hpp"

namespace allostery {

namespace {

Word letter_word(Letter l) { return Word{l}; }

// Substitutes image words for the letters of w.
Word substitute(const std::vector<Word>& images, const Word& w) {
  std::vector<Letter> out;
  for (Letter l : w) {
    const Word& img = images[static_cast<std::size_t>(generator_of(l))];
    if (l > 0) {
      out.insert(out.end(), img.begin(), img.end());
    } else {
      for (auto it = img.letters().rbegin(); it != img.letters().rend(); ++it) {
        out.push_back(-*it);
      }
    }
  }
  return Word(out);
}

}  // namespace

EmbeddingData orientation_double_cover(int genus) {
  if (genus < 3) {
    throw DomainError("orientation double cover needs non-orientable genus >= 3");
  }
  EmbeddingData ed;
  ed.genus = genus;
  ed.nonorientable = Presentation::nonorientable(genus);
  const int n = genus - 1;
  const int size_a = n / 2;
  const int size_b = n - size_a;
  ed.orientable = Presentation::orientable(size_a, size_b);
  const auto& gam = ed.orientable;
  auto x = [](int i) { return positive_letter(i - 1); };
  ed.sigma = x(1);
  ed.parity.assign(static_cast<std::size_t>(genus), 1);

  // Handle i = 1..n of the orientable group comes from x_{i+1}:
  // c_i = x_{i+1}^2, y_i = x_{i+1} x_1^-1, C_i = c_{i+1} ... c_n,
  // e_i = C_i^-1 c_i^-1 C_i, f_i = C_i^-1 y_i^-1 C_i, prod [e_i, f_i] = 1.
  std::vector<Word> c(static_cast<std::size_t>(n + 1)), y(c.size()), big_c(c.size() + 1);
  for (int i = 1; i <= n; ++i) {
    c[i] = Word{x(i + 1), x(i + 1)};
    y[i] = Word{x(i + 1), -x(1)};
  }
  big_c[n] = Word{};
  for (int i = n - 1; i >= 0; --i) {
    big_c[i] = c[i + 1] * big_c[i + 1];
  }
  std::vector<Word> e(c.size()), f(c.size());
  for (int i = 1; i <= n; ++i) {
    e[i] = big_c[i].inverse() * c[i].inverse() * big_c[i];
    f[i] = big_c[i].inverse() * y[i].inverse() * big_c[i];
  }

  // Pairs 1..|A| become (a_i, alpha_i); the remaining pairs are read in
  // reverse as (beta_j, b_j) because prod [b_j, beta_j]^-1 = prod_rev [beta_j, b_j].
  std::vector<Word> e_gamma(c.size()), f_gamma(c.size());
  ed.images.assign(static_cast<std::size_t>(gam.num_generators()), Word{});
  for (int i = 1; i <= n; ++i) {
    Letter el;
    Letter fl;
    if (i <= size_a) {
      el = gam.letter(GeneratorKind::a, i);
      fl = gam.letter(GeneratorKind::alpha, i);
    } else {
      int j = n + 1 - i;
      el = gam.letter(GeneratorKind::beta, j);
      fl = gam.letter(GeneratorKind::b, j);
    }
    ed.images[static_cast<std::size_t>(generator_of(el))] = e[i];
    ed.images[static_cast<std::size_t>(generator_of(fl))] = f[i];
    e_gamma[i] = letter_word(el);
    f_gamma[i] = letter_word(fl);
  }

  // Inverse dictionary over Gamma: c_i = C_i e_i^-1 C_i^-1, y_i = C_i f_i^-1 C_i^-1.
  std::vector<Word> cg(c.size()), yg(c.size()), big_cg(c.size() + 1);
  big_cg[n] = Word{};
  for (int i = n; i >= 1; --i) {
    cg[i] = big_cg[i] * e_gamma[i].inverse() * big_cg[i].inverse();
    yg[i] = big_cg[i] * f_gamma[i].inverse() * big_cg[i].inverse();
    big_cg[i - 1] = cg[i] * big_cg[i];
  }
  // Schreier generators u_k = x_k x_1^-1, v_k = x_1 x_k with u_k v_k = c_{k-1},
  // u_1 = 1 and v_1 = x_1^2 = (c_1 ... c_n)^-1.
  ed.conjugation.assign(static_cast<std::size_t>(genus), {Word{}, Word{}});
  ed.conjugation[0] = {Word{}, big_cg[0].inverse()};
  for (int k = 2; k <= genus; ++k) {
    const Word& u = yg[k - 1];
    ed.conjugation[static_cast<std::size_t>(k - 1)] = {u, u.inverse() * cg[k - 1]};
  }
  return ed;
}

SheetWord rewrite_to_subgroup(const EmbeddingData& ed, const Word& w, int sheet) {
  std::vector<Letter> out;
  int s = sheet;
  for (Letter l : w) {
    auto k = static_cast<std::size_t>(generator_of(l));
    if (k >= ed.conjugation.size()) {
      throw ForeignGenerators("word uses letters outside the non-orientable presentation");
    }
    int flipped = s ^ ed.parity[k];
    if (l > 0) {
      const Word& h = ed.conjugation[k][static_cast<std::size_t>(s)];
      out.insert(out.end(), h.begin(), h.end());
    } else {
      Word h = ed.conjugation[k][static_cast<std::size_t>(flipped)].inverse();
      out.insert(out.end(), h.begin(), h.end());
    }
    s = flipped;
  }
  return {Word(out), s};
}

std::vector<Word> conjugated_gamma_a_words(const EmbeddingData& ed) {
  std::vector<Word> out;
  for (Letter l : ed.orientable.gamma_a_generators()) {
    out.push_back(rewrite_to_subgroup(ed, ed.images[static_cast<std::size_t>(generator_of(l))], 1).word);
  }
  return out;
}

nlohmann::json EmbeddingData::to_json() const {
  nlohmann::json imgs = nlohmann::json::object();
  for (int g = 0; g < orientable.num_generators(); ++g) {
    imgs[orientable.generator_name(g)] = nonorientable.format(images[static_cast<std::size_t>(g)]);
  }
  nlohmann::json conj = nlohmann::json::object();
  for (int k = 0; k < nonorientable.num_generators(); ++k) {
    const auto& pair = conjugation[static_cast<std::size_t>(k)];
    conj[nonorientable.generator_name(k)] = {orientable.format(pair[0]),
                                             orientable.format(pair[1])};
  }
  return {{"genus", genus},
          {"sigma", nonorientable.format(sigma)},
          {"orientable", orientable.to_json()},
          {"parity", parity},
          {"images", std::move(imgs)},
          {"conjugation", std::move(conj)}};
}

EmbeddingData EmbeddingData::from_json(const nlohmann::json& j) {
  try {
    EmbeddingData ed;
    ed.genus = j.at("genus").get<int>();
    ed.nonorientable = Presentation::nonorientable(ed.genus);
    ed.orientable = Presentation::from_json(j.at("orientable"));
    auto sig = ed.nonorientable.parse(j.at("sigma").get<std::string>());
    if (sig.size() != 1) {
      throw ParseError("sigma must be a single generator");
    }
    ed.sigma = sig[0];
    ed.parity = j.at("parity").get<std::vector<int>>();
    for (int g = 0; g < ed.orientable.num_generators(); ++g) {
      ed.images.push_back(
          ed.nonorientable.parse(j.at("images").at(ed.orientable.generator_name(g)).get<std::string>()));
    }
    for (int k = 0; k < ed.nonorientable.num_generators(); ++k) {
      const auto& pair = j.at("conjugation").at(ed.nonorientable.generator_name(k));
      ed.conjugation.push_back({ed.orientable.parse(pair.at(0).get<std::string>()),
                                ed.orientable.parse(pair.at(1).get<std::string>())});
    }
    return ed;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("embedding JSON: ") + e.what());
  }
}

PointedAction induce(const PointedAction& act, const EmbeddingData& ed) {
  if (!(act.presentation() == ed.orientable)) {
    throw PresentationMismatch("action is not over the orientation subgroup presentation");
  }
  const Point m = act.degree();
  std::vector<Permutation> perms;
  for (int k = 0; k < ed.nonorientable.num_generators(); ++k) {
    Permutation perm(static_cast<std::size_t>(m) * 2);
    auto ks = static_cast<std::size_t>(k);
    for (int s = 0; s < 2; ++s) {
      const Word& h = ed.conjugation[ks][static_cast<std::size_t>(s)];
      Point offset = static_cast<Point>((s ^ ed.parity[ks]) * m);
      for (Point x = 0; x < m; ++x) {
        perm[x + static_cast<Point>(s) * m] = act.act(h, x) + offset;
      }
    }
    perms.push_back(std::move(perm));
  }
  nlohmann::json meta = {{"component", "induced"}, {"base", act.meta()}};
  PointedAction out(ed.nonorientable, std::move(perms), act.basepoint(), std::move(meta));
  auto report = verify_action(out);
  if (!report.ok) {
    throw RelatorFailure("induced action fails " + report.axiom + ": " + report.detail);
  }
  for (int g = 0; g < ed.orientable.num_generators(); ++g) {
    const Word& img = ed.images[static_cast<std::size_t>(g)];
    for (Point x = 0; x < m; ++x) {
      if (out.act(img, x) != act.image(positive_letter(g), x)) {
        throw RelatorFailure("image of " + ed.orientable.generator_name(g) +
                             " does not restrict to the base action at point " +
                             std::to_string(x));
      }
    }
  }
  return out;
}

namespace {

EmbeddingReport fail(std::string check, std::string detail) {
  return {false, std::move(check), std::move(detail)};
}

std::vector<PointedAction> nonorientable_battery(const Presentation& pres) {
  const int g = pres.genus();
  std::vector<PointedAction> bases;
  std::vector<long long> parity(static_cast<std::size_t>(g), 1);
  bases.push_back(abelian_cover(pres, parity, 2));
  for (Point d : {3u, 4u, 5u}) {
    std::vector<long long> s(static_cast<std::size_t>(g), 0);
    s[0] = 1;
    s[1] = -1;
    bases.push_back(abelian_cover(pres, s, d));
  }
  {
    std::vector<long long> s(static_cast<std::size_t>(g), 0);
    s[0] = 1;
    s[1] = 1;
    s[2] = -2;
    bases.push_back(abelian_cover(pres, s, 5));
  }
  std::vector<PointedAction> out;
  std::uint64_t seed = 0x5eed;
  for (const auto& base : bases) {
    out.push_back(base);
    for (unsigned p : {2u, 3u}) {
      auto hd = homology(base, p, std::span<const Word>{});
      for (std::size_t rank = 1; rank <= std::min<std::size_t>(2, hd.dimension()); ++rank) {
        auto sm = random_separation(hd, rank, seed++);
        out.push_back(cocycle_cover(base, hd, sm));
      }
    }
  }
  return out;
}

std::vector<PointedAction> orientable_samples(const Presentation& pres) {
  std::vector<PointedAction> out;
  out.push_back(cyclic_cover(pres, 2));
  out.push_back(cyclic_cover(pres, 3));
  auto base = cyclic_cover(pres, 3);
  auto hd = homology(base, 2, std::span<const Word>{});
  auto sm = random_separation(hd, 2, 0xc0ffee);
  out.push_back(cocycle_cover(base, hd, sm));
  return out;
}

}  // namespace

EmbeddingReport verify_embedding(const EmbeddingData& ed) {
  const auto& gp = ed.nonorientable;
  const auto& gam = ed.orientable;
  // (a) parity and shape.
  if (ed.parity.size() != static_cast<std::size_t>(gp.num_generators()) ||
      ed.conjugation.size() != ed.parity.size() ||
      ed.images.size() != static_cast<std::size_t>(gam.num_generators())) {
    return fail("a", "table sizes do not match the presentations");
  }
  if (gam.size_a() + gam.size_b() != ed.genus - 1) {
    return fail("a", "orientable genus is not g' - 1");
  }
  for (std::size_t k = 0; k < ed.parity.size(); ++k) {
    if (ed.parity[k] != 1) {
      return fail("a", "parity of " + gp.generator_name(static_cast<int>(k)) + " is not 1");
    }
  }
  if (ed.parity[static_cast<std::size_t>(generator_of(ed.sigma))] != 1) {
    return fail("a", "sigma has even parity");
  }
  for (int g = 0; g < gam.num_generators(); ++g) {
    const Word& img = ed.images[static_cast<std::size_t>(g)];
    int par = 0;
    for (Letter l : img) {
      par ^= ed.parity[static_cast<std::size_t>(generator_of(l))];
    }
    if (par != 0) {
      return fail("a", "image of " + gam.generator_name(g) + " has odd parity");
    }
  }
  // (b) the substituted relator is trivial in finite quotients of Gamma'.
  Word relator_image = substitute(ed.images, gam.relator());
  for (const auto& q : nonorientable_battery(gp)) {
    auto rep = verify_action(q);
    if (!rep.ok) {
      continue;
    }
    for (Point x = 0; x < q.degree(); ++x) {
      if (q.act(relator_image, x) != x) {
        return fail("b", "substituted relator moves point " + std::to_string(x) +
                             " of a degree-" + std::to_string(q.degree()) + " quotient");
      }
    }
  }
  // (c) induction: lifted relators and restriction symbolically, then on samples.
  for (int s = 0; s < 2; ++s) {
    auto lifted = rewrite_to_subgroup(ed, gp.relator(), s);
    if (lifted.end_sheet != s || !dehn_is_trivial(gam, lifted.word).trivial) {
      return fail("c", "relator lifted at sheet " + std::to_string(s) + " is nontrivial");
    }
  }
  for (int g = 0; g < gam.num_generators(); ++g) {
    auto back = rewrite_to_subgroup(ed, ed.images[static_cast<std::size_t>(g)], 0);
    Word diff = back.word * Word{-positive_letter(g)};
    if (back.end_sheet != 0 || !dehn_is_trivial(gam, diff).trivial) {
      return fail("c", "image of " + gam.generator_name(g) + " does not rewrite back");
    }
  }
  for (const auto& sample : orientable_samples(gam)) {
    try {
      auto induced = induce(sample, ed);
      (void)induced;
    } catch (const RelatorFailure& e) {
      return fail("c", e.what());
    }
  }
  return {};
}

}  // namespace allostery

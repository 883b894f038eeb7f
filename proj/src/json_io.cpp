#include <kuhom/json_io.hpp>

namespace kuhom {

Json scalar_to_json(const LocalScalar& s) {
  return Json{{"num", s.num().get_str()}, {"den", s.den().get_str()}};
}

LocalScalar scalar_from_json(const Json& j) {
  return LocalScalar::from_decimal(j.at("num").get<std::string>(),
                                   j.at("den").get<std::string>());
}

Json poly_to_json(const KuPoly& p) {
  Json arr = Json::array();
  for (const auto& [v, c] : p.coeffs()) {
    Json e = Json{{"v", v}};
    e.update(scalar_to_json(c));
    arr.push_back(std::move(e));
  }
  return arr;
}

KuPoly poly_from_json(const Json& j) {
  KuPoly p;
  for (const auto& e : j) p.add(scalar_from_json(e), e.at("v").get<long>());
  return p;
}

Json series_to_json(const PSeries& s) {
  Json coeffs = Json::array();
  for (size_t t = 0; t < s.size(); ++t) {
    Json e = Json{{"v", t}};
    e.update(scalar_to_json(s.a(static_cast<long>(t))));
    coeffs.push_back(std::move(e));
  }
  return Json{{"p", s.p},
              {"n", s.n},
              {"convention", convention_name(s.convention)},
              {"coeffs", std::move(coeffs)}};
}

Json element_to_json(const TensorElement& e) {
  Json terms = Json::array();
  for (const auto& [key, poly] : e.terms())
    terms.push_back(Json{{"i", key.i}, {"j", key.j}, {"poly", poly_to_json(poly)}});
  return Json{{"terms", std::move(terms)}};
}

TensorElement element_from_json(const Json& j) {
  TensorElement e;
  for (const auto& t : j.at("terms"))
    e.add_poly(t.at("i").get<long>(), t.at("j").get<long>(), poly_from_json(t.at("poly")));
  return e;
}

namespace {

Json gen_entry(const MonoKey& g, const LocalScalar& c) {
  Json e = Json{{"m", g.m}, {"i", g.i}, {"j", g.j}};
  e.update(scalar_to_json(c));
  return e;
}

}  // namespace

Json certificate_to_json(const Certificate& c) {
  Json b = Json::array(), r = Json::array(), u = Json::array();
  for (const auto& [g, s] : c.boundary) b.push_back(gen_entry(g, s));
  for (const auto& [g, s] : c.relations) r.push_back(gen_entry(g, s));
  for (const auto& [col, s] : c.custom) {
    Json e = Json{{"column", element_to_json(col)}};
    e.update(scalar_to_json(s));
    u.push_back(std::move(e));
  }
  Json out = Json{{"boundary", std::move(b)}, {"relations", std::move(r)}};
  if (!u.empty()) out["custom"] = std::move(u);
  return out;
}

Certificate certificate_from_json(const Json& j) {
  Certificate c;
  for (const auto& e : j.value("boundary", Json::array()))
    c.boundary.emplace_back(
        MonoKey{e.at("m").get<long>(), e.at("i").get<long>(), e.at("j").get<long>()},
        scalar_from_json(e));
  for (const auto& e : j.value("relations", Json::array()))
    c.relations.emplace_back(
        MonoKey{e.at("m").get<long>(), e.at("i").get<long>(), e.at("j").get<long>()},
        scalar_from_json(e));
  for (const auto& e : j.value("custom", Json::array()))
    c.custom.emplace_back(element_from_json(e.at("column")), scalar_from_json(e));
  return c;
}

}  // namespace kuhom

#include "qlc/serialize.hpp"

#include <cstdio>
#include <cstdlib>

#include "qlc/errors.hpp"

namespace qlc {
namespace {

std::string float_text(long double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  return buf;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("JSON field '") + key + "' is missing");
  return j.at(key);
}

Json piece_body(const Piece& p) {
  Json j = Json::object();
  if (!p.label.empty()) j["label"] = p.label;
  j["length"] = to_json(p.len);
  return content_to_json(p.content, std::move(j));
}

Piece piece_body_from_json(const Json& j, const Basis* b) {
  std::string label = j.contains("label") ? j.at("label").get<std::string>() : std::string();
  return Piece(length_from_json(field(j, "length"), b), content_from_json(j, b), label);
}

}  // namespace

Json to_json(const Rational& r) { return Json{{"num", r.num()}, {"den", r.den()}}; }

Rational rational_from_json(const Json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    return Rational(field(j, "num").get<std::int64_t>(), field(j, "den").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad rational: ") + e.what());
  }
}

Json basis_to_json(const Basis* b) {
  if (!b) throw ValidationError("cannot serialize a missing basis");
  Json arr = Json::array();
  for (const auto& el : b->elements()) {
    Json e = Json::object();
    e["name"] = el.name;
    if (el.exact) e["exact"] = el.exact->str();
    e["value"] = float_text(el.value);
    arr.push_back(std::move(e));
  }
  return arr;
}

const Basis* basis_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("basis must be an array of elements");
  std::vector<BasisElement> els;
  for (const auto& e : j) {
    BasisElement el;
    el.name = field(e, "name").get<std::string>();
    if (e.contains("exact")) {
      el.exact = Quadratic::parse(e.at("exact").get<std::string>());
    } else {
      const Json& v = field(e, "value");
      el.value = v.is_string() ? std::strtold(v.get<std::string>().c_str(), nullptr) : v.get<long double>();
    }
    els.push_back(std::move(el));
  }
  return Basis::make(std::move(els));
}

Json to_json(const ExactLength& x) {
  Json arr = Json::array();
  for (std::size_t i = 0; i < x.dimension(); ++i) arr.push_back(to_json(x.coeff(i)));
  return arr;
}

ExactLength length_from_json(const Json& j, const Basis* b) {
  if (j.is_string()) return ExactLength::parse(b, j.get<std::string>());
  if (j.is_number_integer()) return ExactLength::parse(b, std::to_string(j.get<std::int64_t>()));
  if (!j.is_array()) throw ValidationError("length must be an array of {num, den} or an expression string");
  if (j.size() > b->size()) throw ValidationError("length has more coefficients than the basis");
  std::vector<Rational> c;
  for (const auto& e : j) c.push_back(rational_from_json(e));
  return ExactLength::from_coeffs(b, c);
}

Json content_to_json(const PieceContent& c, Json into) {
  Json atoms = Json::array();
  for (const auto& a : c.atoms()) atoms.push_back(Json{{"at", to_json(a.at)}, {"weight", to_json(a.weight)}});
  Json steps = Json::array();
  for (const auto& s : c.steps())
    steps.push_back(Json{{"start", to_json(s.start)}, {"end", to_json(s.end)}, {"value", to_json(s.value)}});
  into["atoms"] = std::move(atoms);
  into["steps"] = std::move(steps);
  return into;
}

PieceContent content_from_json(const Json& j, const Basis* b) {
  std::vector<Atom> atoms;
  std::vector<Step> steps;
  if (j.contains("atoms"))
    for (const auto& a : j.at("atoms")) atoms.push_back({length_from_json(field(a, "at"), b), rational_from_json(field(a, "weight"))});
  if (j.contains("steps"))
    for (const auto& s : j.at("steps"))
      steps.push_back({length_from_json(field(s, "start"), b), length_from_json(field(s, "end"), b),
                       rational_from_json(field(s, "value"))});
  return PieceContent::normalized(std::move(atoms), std::move(steps));
}

Json to_json(const Piece& p) {
  Json j = Json::object();
  j["basis"] = basis_to_json(p.len.basis());
  Json body = piece_body(p);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j;
}

Piece piece_from_json(const Json& j) { return piece_body_from_json(j, basis_from_json(field(j, "basis"))); }

Json to_json(const MeasureWindow& w) {
  Json j = Json::object();
  j["basis"] = basis_to_json(w.basis());
  j["origin"] = to_json(w.origin());
  j["end"] = to_json(w.end());
  return content_to_json(w.content(), std::move(j));
}

MeasureWindow window_from_json(const Json& j) {
  const Basis* b = basis_from_json(field(j, "basis"));
  return MeasureWindow(length_from_json(field(j, "origin"), b), length_from_json(field(j, "end"), b),
                       content_from_json(j, b));
}

Json to_json(const ColoredDeloneSet& d) {
  Json j = Json::object();
  j["basis"] = basis_to_json(d.points.empty() ? Basis::unit() : d.points.front().basis());
  Json pts = Json::array();
  for (const auto& p : d.points) pts.push_back(to_json(p));
  j["points"] = std::move(pts);
  j["colors"] = d.colors;
  return j;
}

ColoredDeloneSet delone_from_json(const Json& j) {
  const Basis* b = basis_from_json(field(j, "basis"));
  std::vector<ExactLength> pts;
  for (const auto& p : field(j, "points")) pts.push_back(length_from_json(p, b));
  std::vector<int> cols = j.contains("colors") ? j.at("colors").get<std::vector<int>>() : std::vector<int>(pts.size(), 0);
  return ColoredDeloneSet(std::move(pts), std::move(cols));
}

Json to_json(const PieceSet& ps) {
  Json j = Json::object();
  j["basis"] = basis_to_json(ps.min_length().basis());
  Json arr = Json::array();
  for (const auto& p : ps.pieces()) arr.push_back(piece_body(p));
  j["pieces"] = std::move(arr);
  return j;
}

PieceSet piece_set_from_json(const Json& j) {
  const Basis* b = basis_from_json(field(j, "basis"));
  std::vector<Piece> pieces;
  for (const auto& p : field(j, "pieces")) pieces.push_back(piece_body_from_json(p, b));
  return PieceSet(std::move(pieces));
}

Json decomposition_to_json(const Decomposition& d) {
  Json j = Json::object();
  j["x0"] = to_json(d.x0);
  j["labels"] = d.label_names();
  return j;
}

Decomposition decomposition_from_json(const Json& j, const PieceSet& pieces, const Basis* b) {
  Decomposition d{length_from_json(field(j, "x0"), b), {}, pieces};
  for (const auto& name : field(j, "labels")) {
    auto idx = pieces.index_of(name.get<std::string>());
    if (!idx) throw ValidationError("decomposition label '" + name.get<std::string>() + "' is not a known piece");
    d.labels.push_back(*idx);
  }
  return d;
}

Json report_skeleton(const std::string& property, const MeasureWindow& w, const std::string& verdict) {
  Json j = Json::object();
  j["property"] = property;
  j["window"] = Json::array({to_json(w.origin()), to_json(w.end())});
  j["verdict"] = verdict;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qlc

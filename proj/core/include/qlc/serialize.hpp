#pragma once

// Canonical JSON: a basis block first, then content with every rational
// written as {"num", "den"} and every length as one such pair per basis
// element. Keys keep insertion order so a dump/parse/dump cycle is
// byte-stable.

#include <nlohmann/json.hpp>
#include <string>

#include "qlc/flc.hpp"
#include "qlc/measure.hpp"

namespace qlc {

using Json = nlohmann::ordered_json;

Json to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json basis_to_json(const Basis* b);
const Basis* basis_from_json(const Json& j);

Json to_json(const ExactLength& x);
ExactLength length_from_json(const Json& j, const Basis* b);

Json content_to_json(const PieceContent& c, Json into = Json::object());
PieceContent content_from_json(const Json& j, const Basis* b);

Json to_json(const Piece& p);
Piece piece_from_json(const Json& j);

Json to_json(const MeasureWindow& w);
MeasureWindow window_from_json(const Json& j);

Json to_json(const ColoredDeloneSet& d);
ColoredDeloneSet delone_from_json(const Json& j);

Json to_json(const PieceSet& ps);
PieceSet piece_set_from_json(const Json& j);

// {"x0", "labels": [names]} relative to a piece set stored alongside.
Json decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j, const PieceSet& pieces, const Basis* b);

// {property, window: [a, b], verdict} skeleton for checker reports.
Json report_skeleton(const std::string& property, const MeasureWindow& w, const std::string& verdict);

std::string dump(const Json& j);  // two-space indent, trailing newline

}  // namespace qlc

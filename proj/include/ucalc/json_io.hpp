// Copyright (c) ucalc contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <json.hpp>
#include <string>

#include "ucalc/cia.hpp"
#include "ucalc/diffeo.hpp"
#include "ucalc/model.hpp"

namespace ucalc {

using Json = nlohmann::json;

// Scalars are {"p", "v", "digits"} with digits least significant first;
// exact nonzero values also carry "num" and "den" as decimal strings so the
// round trip is bit-exact. Exact zero is {"p", "v": "inf", "digits": []}.
// Parsers also accept a bare integer or a "a/b" string as an exact value.
// Every parse failure is a ParseError naming the JSON path.
enum class ScalarStyle { Digits, Compact };

Json to_json(const Padic& x, ScalarStyle style = ScalarStyle::Digits);
Json to_json(std::span<const Padic> x, ScalarStyle style = ScalarStyle::Digits);
Json to_json(const Ball& b, const PadicContext& ctx, ScalarStyle style = ScalarStyle::Digits);
Json to_json(const Region& r, const PadicContext& ctx, ScalarStyle style = ScalarStyle::Digits);
Json to_json(const FunctionModel& f, ScalarStyle style = ScalarStyle::Digits);
Json to_json(const StructAlgebra& A, ScalarStyle style = ScalarStyle::Digits);
// {"ball": ..., "sigma": model}.
Json to_json(const BallEndo& g, ScalarStyle style = ScalarStyle::Digits);

Padic parse_scalar(const Json& j, const PadicContext& ctx, const std::string& path = "$");
PadicVector parse_vector(const Json& j, const PadicContext& ctx, const std::string& path = "$");
Ball parse_ball(const Json& j, const PadicContext& ctx, const std::string& path = "$");
// An empty region takes its dimension from an optional "d" key (default 1).
Region parse_region(const Json& j, const PadicContext& ctx, const std::string& path = "$");
// "domain" defaults to the union of the piece balls and "codim" to 1.
FunctionModel parse_model(const Json& j, const PadicContext& ctx, const std::string& path = "$");
StructAlgebra parse_algebra(const Json& j, const PadicContext& ctx, const std::string& path = "$");
// "sigma" may omit its domain, which then defaults to the ball, and its
// codim, which defaults to the dimension of the ball.
BallEndo parse_endo(const Json& j, const PadicContext& ctx, const std::string& path = "$");

enum class DocumentKind { Scalar, Vector, Ball, Region, Model, Algebra, Endo };

const char* to_string(DocumentKind kind);
DocumentKind parse_kind(const std::string& name);
// Guessed from the shape of the document.
DocumentKind detect_kind(const Json& j);

// Canonical re-serialization of a document of the given kind.
Json convert(const Json& j, DocumentKind kind, const PadicContext& ctx, ScalarStyle style);

// First "p" key found in the document (searching depth first), if any.
std::optional<int> find_prime(const Json& j);

Json read_json_file(const std::string& path);

}  // namespace ucalc

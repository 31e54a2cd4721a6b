#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "squatcalc/functional_calculus.hpp"
#include "squatcalc/quat_matrix.hpp"
#include "squatcalc/quaternion.hpp"
#include "squatcalc/s_spectrum.hpp"
#include "squatcalc/slice_function.hpp"

namespace squatcalc {

using nlohmann::json;

// Quaternions serialize as [w, x, y, z]; a bare number is accepted on input
// and means a real quaternion.
inline void to_json(json& j, const Quaternion& q) { j = json::array({q.w, q.x, q.y, q.z}); }

inline void from_json(const json& j, Quaternion& q) {
  if (j.is_number()) {
    q = Quaternion(j.get<double>());
    return;
  }
  if (!j.is_array() || j.size() != 4)
    throw std::invalid_argument("quaternion: expected [w,x,y,z] or a number");
  q = Quaternion(j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>(),
                 j.at(3).get<double>());
}

// Matrices serialize as {"n": n, "entries": [row0, row1, ...]} row major.
inline json matrix_to_json(const QuatMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < m.n(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.n(); ++c) {
      json q;
      to_json(q, m.at(r, c));
      row.push_back(std::move(q));
    }
    rows.push_back(std::move(row));
  }
  return json{{"n", m.n()}, {"entries", std::move(rows)}};
}

inline QuatMatrix matrix_from_json(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw std::invalid_argument("matrix: expected {\"n\":..., \"entries\":[...]}");
  const int n = j.at("n").get<int>();
  if (n < 0) throw std::invalid_argument("matrix: negative dimension");
  const json& rows = j.at("entries");
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw std::invalid_argument("matrix: wrong row count");
  QuatMatrix m(n);
  for (int r = 0; r < n; ++r) {
    const json& row = rows.at(r);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw std::invalid_argument("matrix: wrong column count");
    for (int c = 0; c < n; ++c) {
      Quaternion q;
      from_json(row.at(c), q);
      m.at(r, c) = q;
    }
  }
  return m;
}

inline json spectrum_report_to_json(const SpectrumReport& rep) {
  json spheres = json::array();
  for (const auto& s : rep.spheres)
    spheres.push_back(json{{"x", s.x}, {"y", s.y}, {"mult", s.multiplicity}});
  return json{{"spheres", std::move(spheres)}, {"norm_bound", rep.norm_bound}};
}

inline json contour_to_json(const Contour& contour) {
  json circles = json::array();
  for (const auto& c : contour.circles)
    circles.push_back(json{{"center", json::array({c.cx, c.cy})}, {"radius", c.radius}});
  return circles;
}

inline json calculus_result_to_json(const CalculusResult& res) {
  json slice;
  to_json(slice, res.contour.slice_unit.q());
  return json{{"value", matrix_to_json(res.value)},
              {"error_estimate", res.error_estimate},
              {"slice", std::move(slice)},
              {"contour", contour_to_json(res.contour)}};
}

inline json unbounded_result_to_json(const UnboundedResult& res) {
  return json{{"k", res.k},
              {"discrepancy", res.discrepancy},
              {"transform_route", calculus_result_to_json(res.transform_route)},
              {"direct_route", calculus_result_to_json(res.direct_route)}};
}

// Function specs: {"type": "polynomial", "coeffs": [...]} and friends; an
// optional "value_at_infinity" member overrides the derived limit.
inline SliceFunction function_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw std::invalid_argument("function: expected an object with a \"type\"");
  const std::string type = j.at("type").get<std::string>();
  SliceFunction f = SliceFunction::exponential();
  if (type == "polynomial") {
    std::vector<Quaternion> coeffs;
    for (const auto& c : j.at("coeffs")) {
      Quaternion q;
      from_json(c, q);
      coeffs.push_back(q);
    }
    f = SliceFunction::polynomial(std::move(coeffs));
  } else if (type == "power_series") {
    std::vector<Quaternion> coeffs;
    for (const auto& c : j.at("coeffs")) {
      Quaternion q;
      from_json(c, q);
      coeffs.push_back(q);
    }
    f = SliceFunction::power_series(std::move(coeffs), j.at("center").get<double>(),
                                    j.at("radius").get<double>());
  } else if (type == "intrinsic_rational") {
    f = SliceFunction::intrinsic_rational(j.at("num").get<std::vector<double>>(),
                                          j.at("den").get<std::vector<double>>());
  } else if (type == "exp") {
    f = SliceFunction::exponential();
  } else if (type == "resolvent_shift") {
    f = SliceFunction::resolvent_shift(j.at("alpha").get<double>());
  } else if (type == "transformed") {
    f = SliceFunction::transformed(function_from_json(j.at("inner")), j.at("k").get<double>());
  } else {
    throw std::invalid_argument("function: unknown type \"" + type + "\"");
  }
  if (j.contains("value_at_infinity")) {
    Quaternion v;
    from_json(j.at("value_at_infinity"), v);
    f.set_value_at_infinity(v);
  }
  return f;
}

inline json function_to_json(const SliceFunction& f) {
  json j;
  switch (f.kind()) {
    case SliceFunction::Kind::Polynomial: {
      json coeffs = json::array();
      for (const auto& c : f.coeffs()) {
        json q;
        to_json(q, c);
        coeffs.push_back(std::move(q));
      }
      j = json{{"type", "polynomial"}, {"coeffs", std::move(coeffs)}};
      break;
    }
    case SliceFunction::Kind::PowerSeries: {
      json coeffs = json::array();
      for (const auto& c : f.coeffs()) {
        json q;
        to_json(q, c);
        coeffs.push_back(std::move(q));
      }
      j = json{{"type", "power_series"},
               {"coeffs", std::move(coeffs)},
               {"center", f.center()},
               {"radius", f.radius()}};
      break;
    }
    case SliceFunction::Kind::IntrinsicRational:
      j = json{{"type", "intrinsic_rational"}, {"num", f.num()}, {"den", f.den()}};
      break;
    case SliceFunction::Kind::Exp:
      j = json{{"type", "exp"}};
      break;
    case SliceFunction::Kind::ResolventShift:
      j = json{{"type", "resolvent_shift"}, {"alpha", f.alpha()}};
      break;
    case SliceFunction::Kind::Transformed:
      j = json{{"type", "transformed"},
               {"inner", function_to_json(f.inner())},
               {"k", f.transform_k()}};
      break;
  }
  if (f.value_at_infinity()) {
    json v;
    to_json(v, *f.value_at_infinity());
    j["value_at_infinity"] = std::move(v);
  }
  return j;
}

namespace detail {

inline void dump17_impl(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::null:
      out += "null";
      break;
    case json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      out += j.dump();
      break;
    case json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) throw std::logic_error("dump17: non-finite number");
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      break;
    }
    case json::value_t::string:
      out += json(j.get<std::string>()).dump();  // reuse the library's escaping
      break;
    case json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += ',';
        first = false;
        dump17_impl(e, out);
      }
      out += ']';
      break;
    }
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // keys iterate sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump17_impl(it.value(), out);
      }
      out += '}';
      break;
    }
    default:
      throw std::logic_error("dump17: unsupported JSON value type");
  }
}

}  // namespace detail

// Compact JSON with every floating-point number printed to 17 significant
// digits (round-trip exact for doubles) and deterministic key order.  The
// library's own dump() prints shortest-round-trip forms, which is also exact
// but harder to diff against fixed-precision records.
inline std::string dump17(const json& j) {
  std::string out;
  detail::dump17_impl(j, out);
  return out;
}

inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return json::parse(in);
}

}  // namespace squatcalc

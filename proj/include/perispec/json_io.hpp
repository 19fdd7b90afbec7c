#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "perispec/error.hpp"
#include "perispec/matrix.hpp"
#include "perispec/spectrum.hpp"

namespace perispec {

using Json = nlohmann::ordered_json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline double finite_number(const Json& j, const std::string& where) {
    if (!j.is_number()) throw Error(ErrorKind::kMalformedInput, where + ": expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw Error(ErrorKind::kMalformedInput, where + ": non-finite number");
    return v;
}

inline Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::kMalformedInput, where + ": expected [re, im]");
    return {finite_number(j[0], where), finite_number(j[1], where)};
}

inline std::size_t dimension_field(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0) {
        throw Error(ErrorKind::kMalformedInput, std::string("matrix field '") + key + "' must be a positive integer");
    }
    return j[key].get<std::size_t>();
}

/// {"rows": n, "cols": m, "data": [[[re, im], ...], ...]}
inline Json matrix_to_json(const CMatrix& a) {
    Json data = Json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
        data.push_back(std::move(row));
    }
    return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j) {
    if (!j.is_object()) throw Error(ErrorKind::kMalformedInput, "matrix must be a JSON object");
    const std::size_t rows = dimension_field(j, "rows");
    const std::size_t cols = dimension_field(j, "cols");
    if (!j.contains("data") || !j["data"].is_array() || j["data"].size() != rows) {
        throw Error(ErrorKind::kMalformedInput, "matrix 'data' must hold exactly 'rows' rows");
    }
    CMatrix a(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const Json& row = j["data"][i];
        if (!row.is_array() || row.size() != cols) {
            throw Error(ErrorKind::kMalformedInput, "matrix row " + std::to_string(i) + " does not have 'cols' entries");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            a(i, c) = complex_from_json(row[c], "matrix entry (" + std::to_string(i) + ", " + std::to_string(c) + ")");
        }
    }
    return a;
}

/// Components below 1e-13 of the radius are written as exact zeros.
inline Json spectrum_to_json(const PeripheralSpectrum& s) {
    Json points = Json::array();
    const double floor = 1e-13 * std::max(1.0, s.radius);
    auto clean = [floor](double v) { return std::abs(v) <= floor ? 0.0 : v; };
    for (const auto& z : s.points) points.push_back(Json::array({clean(z.real()), clean(z.imag())}));
    return {{"radius", s.radius}, {"points", std::move(points)}};
}

inline PeripheralSpectrum spectrum_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("points") || !j["points"].is_array()) {
        throw Error(ErrorKind::kMalformedInput, "spectrum must be an object with a 'points' array");
    }
    std::vector<Complex> pts;
    for (const auto& p : j["points"]) pts.push_back(complex_from_json(p, "spectrum point"));
    return make_spectrum(std::move(pts));
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::kMalformedInput, origin + ": " + e.what());
    }
}

inline Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kMalformedInput, "cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_json_text(buffer.str(), path);
}

inline CMatrix read_matrix_file(const std::string& path) { return matrix_from_json(read_json_file(path)); }

}  // namespace perispec

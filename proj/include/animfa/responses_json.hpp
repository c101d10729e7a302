#pragma once

#include <string_view>
#include <vector>

#include "json.hpp"

#include "animfa/responses.hpp"

namespace animfa {

/// Custom response pair from the JSON schema
///   {"fbr": [c0, c1, ...], "fcr": [c0, c1, ...]}
/// with coefficients in ascending degree. Throws std::invalid_argument on
/// malformed documents, NegativityError / BothZeroError on bad polynomials.
inline FunctionalResponsePair from_json_string(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("bad response JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("fbr") || !doc.contains("fcr"))
        throw std::invalid_argument("response JSON must be {\"fbr\": [...], \"fcr\": [...]}");
    auto coeffs = [](const nlohmann::json& node, const char* key) {
        if (!node.is_array())
            throw std::invalid_argument(std::string(key) + " must be a coefficient array");
        std::vector<double> c;
        c.reserve(node.size());
        for (const auto& v : node) {
            if (!v.is_number())
                throw std::invalid_argument(std::string(key) + " has a non-numeric entry");
            c.push_back(v.get<double>());
        }
        return c;
    };
    return from_polynomial(coeffs(doc["fbr"], "fbr"), coeffs(doc["fcr"], "fcr"));
}

}  // namespace animfa

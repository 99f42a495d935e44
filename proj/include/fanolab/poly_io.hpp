#pragma once

#include <string>
#include <vector>

#include "fanolab/poly.hpp"
#include "json.hpp"

namespace fanolab {

// Variable names are ring metadata only; algorithms work on indices.
struct VarNames {
    std::vector<std::string> names;

    VarNames() = default;
    explicit VarNames(std::vector<std::string> n) : names(std::move(n)) {}
    int arity() const { return static_cast<int>(names.size()); }
    int index_of(const std::string& s) const {
        for (size_t i = 0; i < names.size(); ++i)
            if (names[i] == s) return static_cast<int>(i);
        return -1;
    }

    static VarNames p5();      // x0..x5
    static VarNames chart(int pivot0, int pivot1);  // p0j/p1j over the non-pivot indices
};

// Grammar: variables [A-Za-z][A-Za-z0-9_]*, integer or a/b literals,
// operators + - * ^, parentheses, whitespace insensitive.
PolyQ parse_poly(const std::string& text, const VarNames& vars);
std::string format_poly(const PolyQ& p, const VarNames& vars);

nlohmann::ordered_json poly_to_json(const PolyQ& p, const VarNames& vars);
PolyQ poly_from_json(const nlohmann::json& j, VarNames* names_out = nullptr);

}  // namespace fanolab

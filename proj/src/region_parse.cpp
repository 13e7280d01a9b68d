#include <cstdlib>
#include <map>
#include <sstream>

#include "wsc/region.hpp"

namespace wsc {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ParseError("region spec: bad number '" + s + "'");
    return v;
}

std::vector<double> parse_vector(const std::string& s) {
    std::vector<double> out;
    for (const auto& part : split(s, ',')) out.push_back(parse_number(part));
    return out;
}

}  // namespace

// Spec text: "<kind> key=value ...". Vectors are comma-separated decimals,
// lists of vectors are semicolon-separated. See README for the full schema.
RegionPtr parse_region(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string kind;
    if (!(is >> kind)) throw ParseError("empty region spec");
    std::map<std::string, std::string> kv;
    std::string tok;
    while (is >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError("region spec: expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const char* key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end())
            throw ParseError("region spec: kind '" + kind + "' requires " + key + "=");
        return it->second;
    };

    try {
        if (kind == "full") {
            int d = static_cast<int>(parse_number(need("d")));
            return make_full_cube(d);
        }
        if (kind == "box") {
            return make_box(parse_vector(need("lo")), parse_vector(need("hi")));
        }
        if (kind == "ball") {
            return make_ball(parse_vector(need("center")), parse_number(need("radius")));
        }
        if (kind == "ellipsoid") {
            return make_ellipsoid(parse_vector(need("center")), parse_vector(need("axes")));
        }
        if (kind == "simplex") {
            std::vector<std::vector<double>> verts;
            for (const auto& part : split(need("vertices"), ';')) verts.push_back(parse_vector(part));
            return make_simplex(std::move(verts));
        }
        if (kind == "polytope") {
            int d = static_cast<int>(parse_number(need("d")));
            std::vector<Halfspace> hs;
            for (const auto& part : split(need("halfspaces"), ';')) {
                auto nums = parse_vector(part);
                if (static_cast<int>(nums.size()) != d + 1)
                    throw ParseError("polytope halfspace needs d normal entries plus offset");
                Halfspace h;
                h.normal.assign(nums.begin(), nums.end() - 1);
                h.offset = nums.back();
                hs.push_back(std::move(h));
            }
            return make_polytope(d, std::move(hs));
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("region spec: ") + e.what());
    }
    throw ParseError("unknown region kind '" + kind + "'");
}

}  // namespace wsc

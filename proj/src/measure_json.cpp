#include "measure_json.hpp"

#include "errors.hpp"

#include <fstream>
#include <sstream>

namespace freeconv {

namespace {

double number(const nlohmann::json& obj, const char* key)
{
    if (!obj.contains(key)) {
        throw InvalidInput(std::string("missing field '") + key + "'");
    }
    const auto& v = obj.at(key);
    if (!v.is_number()) {
        throw InvalidInput(std::string("field '") + key + "' must be a number");
    }
    return v.get<double>();
}

ComponentSpec component_from_json(const nlohmann::json& c)
{
    if (!c.is_object()) {
        throw InvalidInput("entry must be an object");
    }
    ComponentSpec cs;
    cs.a = number(c, "a");
    cs.b = number(c, "b");
    cs.t_minus = number(c, "t_minus");
    cs.t_plus = number(c, "t_plus");
    cs.weight = number(c, "weight");
    if (c.contains("h")) {
        const auto& h = c.at("h");
        if (!h.is_array()) {
            throw InvalidInput("'h' must be an array of coefficients");
        }
        cs.h.clear();
        for (const auto& coef : h) {
            if (!coef.is_number()) {
                throw InvalidInput("'h' coefficients must be numbers");
            }
            cs.h.push_back(coef.get<double>());
        }
    }
    return cs;
}

template <class Fn>
auto at_index(const char* list, std::size_t i, const Fn& fn)
{
    try {
        return fn();
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string(list) + "[" + std::to_string(i) + "]: " + e.what());
    }
}

} // namespace

MeasureSpec spec_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw InvalidInput("measure spec must be a JSON object");
    }
    MeasureSpec spec;
    if (doc.contains("components")) {
        const auto& comps = doc.at("components");
        if (!comps.is_array()) {
            throw InvalidInput("'components' must be an array");
        }
        for (std::size_t i = 0; i < comps.size(); ++i) {
            spec.components.push_back(at_index("components", i, [&] { return component_from_json(comps[i]); }));
        }
    }
    if (doc.contains("atoms")) {
        const auto& atoms = doc.at("atoms");
        if (!atoms.is_array()) {
            throw InvalidInput("'atoms' must be an array");
        }
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            spec.atoms.push_back(at_index("atoms", i, [&] {
                const auto& a = atoms[i];
                if (!a.is_object()) {
                    throw InvalidInput("entry must be an object");
                }
                return AtomSpec{number(a, "x"), number(a, "mass")};
            }));
        }
    }
    if (doc.contains("centered")) {
        if (!doc.at("centered").is_boolean()) {
            throw InvalidInput("'centered' must be a boolean");
        }
        spec.centered = doc.at("centered").get<bool>();
    }
    return spec;
}

nlohmann::json spec_to_json(const MeasureSpec& spec)
{
    nlohmann::json doc;
    doc["components"] = nlohmann::json::array();
    for (const auto& c : spec.components) {
        doc["components"].push_back({{"a", c.a},
                                     {"b", c.b},
                                     {"t_minus", c.t_minus},
                                     {"t_plus", c.t_plus},
                                     {"h", c.h},
                                     {"weight", c.weight}});
    }
    doc["atoms"] = nlohmann::json::array();
    for (const auto& a : spec.atoms) {
        doc["atoms"].push_back({{"x", a.x}, {"mass", a.mass}});
    }
    doc["centered"] = spec.centered;
    return doc;
}

MeasureSpec parse_spec(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(std::string("malformed JSON: ") + e.what());
    }
    return spec_from_json(doc);
}

MeasureSpec load_spec(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InvalidInput("cannot open measure file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_spec(buf.str());
    } catch (const InvalidInput& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

} // namespace freeconv

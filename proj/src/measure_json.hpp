#pragma once

#include "measure.hpp"

#include <json.hpp>

#include <string>

namespace freeconv {

MeasureSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const MeasureSpec& spec);

MeasureSpec parse_spec(const std::string& text);
MeasureSpec load_spec(const std::string& path);

} // namespace freeconv

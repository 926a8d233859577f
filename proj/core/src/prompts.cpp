#include <algorithm>
#include <cmath>
#include <filesystem>

#include "forge/embedded_data.hpp"
#include "forge/error.hpp"
#include "forge/model.hpp"
#include "forge/providers.hpp"

namespace forge {
namespace {

struct BuiltinTemplate {
  const char* id;
  const char* schema_id;
};

constexpr BuiltinTemplate kBuiltins[] = {
    {"page_filter", "likelihood"},
    {"extract", "challenge_list"},
    {"pair", "duplicate"},
    {"validate", "relevance_list"},
};

std::vector<std::string> find_variables(std::string_view text) {
  std::vector<std::string> vars;
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string_view::npos) {
    const auto end = text.find("}}", pos + 2);
    if (end == std::string_view::npos) break;
    std::string name(text.substr(pos + 2, end - pos - 2));
    if (std::find(vars.begin(), vars.end(), name) == vars.end()) vars.push_back(name);
    pos = end + 2;
  }
  return vars;
}

std::optional<nlohmann::json> unwrap_array(const nlohmann::json& value, const char* key) {
  if (value.is_array()) return std::optional<nlohmann::json>(std::in_place, value);
  if (value.is_object() && value.contains(key) && value.at(key).is_array()) return std::optional<nlohmann::json>(std::in_place, value.at(key));
  return std::nullopt;
}

}  // namespace

PromptRegistry PromptRegistry::builtin() {
  PromptRegistry registry;
  for (const auto& b : kBuiltins) {
    const auto text = embedded::lookup(std::string("prompt/") + b.id);
    if (!text) throw Error(ErrorCode::kInternal, std::string("missing built-in prompt ") + b.id);
    registry.add(PromptTemplate{b.id, std::string(*text), b.schema_id, {}});
  }
  return registry;
}

PromptRegistry PromptRegistry::with_overrides(const std::filesystem::path& dir) {
  PromptRegistry registry = builtin();
  for (const auto& b : kBuiltins) {
    const auto file = dir / (std::string(b.id) + ".txt");
    if (std::filesystem::exists(file)) {
      registry.add(PromptTemplate{b.id, read_file(file), b.schema_id, {}});
    }
  }
  return registry;
}

void PromptRegistry::add(PromptTemplate tmpl) {
  tmpl.variables = find_variables(tmpl.text);
  std::string id = tmpl.id;
  templates_.insert_or_assign(std::move(id), std::move(tmpl));
}

const PromptTemplate* PromptRegistry::find(std::string_view id) const {
  const auto it = templates_.find(id);
  return it == templates_.end() ? nullptr : &it->second;
}

std::string PromptRegistry::render(const JudgeRequest& request) const {
  const PromptTemplate* tmpl = find(request.template_id);
  if (!tmpl) throw Error(ErrorCode::kUnknownTemplate, "unknown template '" + request.template_id + "'");
  std::string out = tmpl->text;
  for (const auto& var : tmpl->variables) {
    if (!request.bindings.is_object() || !request.bindings.contains(var)) {
      throw Error(ErrorCode::kMissingBinding,
                  "template '" + tmpl->id + "' needs binding '" + var + "'");
    }
    const auto& value = request.bindings.at(var);
    const std::string replacement = value.is_string() ? value.get<std::string>() : value.dump();
    const std::string placeholder = "{{" + var + "}}";
    for (std::size_t pos = out.find(placeholder); pos != std::string::npos;
         pos = out.find(placeholder, pos + replacement.size())) {
      out.replace(pos, placeholder.size(), replacement);
    }
  }
  return out;
}

std::optional<nlohmann::json> conform_to_schema(std::string_view schema_id,
                                                const nlohmann::json& value,
                                                const nlohmann::json& bindings) {
  if (schema_id == "likelihood") {
    const nlohmann::json* score = &value;
    if (value.is_object()) {
      if (!value.contains("score")) return std::nullopt;
      score = &value.at("score");
    }
    if (!score->is_number()) return std::nullopt;
    const double v = score->get<double>();
    if (v != std::floor(v) || v < 0 || v > 10) return std::nullopt;
    return nlohmann::json{{"score", static_cast<int>(v)}};
  }
  if (schema_id == "duplicate") {
    const nlohmann::json* flag = &value;
    if (value.is_object()) {
      if (!value.contains("duplicate")) return std::nullopt;
      flag = &value.at("duplicate");
    }
    if (!flag->is_boolean()) return std::nullopt;
    return nlohmann::json{{"duplicate", flag->get<bool>()}};
  }
  if (schema_id == "challenge_list") {
    const auto items = unwrap_array(value, "challenges");
    if (!items) return std::nullopt;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& item : *items) {
      if (!item.is_object()) return std::nullopt;
      nlohmann::json clean = nlohmann::json::object();
      for (const char* key : {"title", "description", "wish", "daily_action"}) {
        if (!item.contains(key) || item.at(key).is_null()) continue;
        if (!item.at(key).is_string()) return std::nullopt;
        clean[key] = item.at(key);
      }
      out.push_back(std::move(clean));
    }
    return out;
  }
  if (schema_id == "relevance_list") {
    const auto items = unwrap_array(value, "relevant");
    if (!items) return std::nullopt;
    for (const auto& flag : *items) {
      if (!flag.is_boolean()) return std::nullopt;
    }
    if (bindings.is_object() && bindings.contains("items") && bindings.at("items").is_array() &&
        bindings.at("items").size() != items->size()) {
      return std::nullopt;
    }
    return std::optional<nlohmann::json>(std::in_place, *items);
  }
  return std::nullopt;
}

std::optional<nlohmann::json> parse_model_json(std::string_view raw) {
  auto attempt = [](std::string_view text) -> std::optional<nlohmann::json> {
    auto parsed = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) return std::nullopt;
    return parsed;
  };
  if (auto direct = attempt(raw)) return direct;

  // Markdown fences or prose around a single JSON value.
  const auto open = raw.find_first_of("[{");
  if (open == std::string_view::npos) return std::nullopt;
  const char close_char = raw[open] == '{' ? '}' : ']';
  const auto close = raw.rfind(close_char);
  if (close == std::string_view::npos || close < open) return std::nullopt;
  return attempt(raw.substr(open, close - open + 1));
}

}  // namespace forge

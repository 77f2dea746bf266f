#pragma once

#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "latloc/failure_lattice.hpp"
#include "latloc/ngram.hpp"
#include "latloc/rules.hpp"

namespace latloc::json_io {

inline constexpr int kFormat = 1;

// Items travel as bare integer ids; the document records their kind once.
nlohmann::json items_to_json(const std::vector<ItemId>& items);
std::vector<ItemId> items_from_json(const nlohmann::json& j, ItemKind kind);
ItemKind parse_item_kind(std::string_view text);

nlohmann::json rule_to_json(const FailureRule& rule);

// {"format":1,"item_kind":...,"rules":[...]}
nlohmann::json rules_to_json(const std::vector<FailureRule>& rules, ItemKind kind = ItemKind::line);
struct RuleFile {
  ItemKind kind = ItemKind::line;
  std::vector<FailureRule> rules;
};
RuleFile rules_from_json(const nlohmann::json& j);

// Everything `explore` needs: the annotated lattice plus the rules and the
// failing coverage it was built from.
struct LatticeFile {
  ItemKind kind = ItemKind::line;
  std::vector<FailureRule> rules;
  std::vector<std::vector<ItemId>> failing_coverage;
};

nlohmann::json lattice_to_json(const FailureLattice& fl, const std::vector<std::vector<ItemId>>& failing_coverage,
                               ItemKind kind = ItemKind::line);
LatticeFile lattice_file_from_json(const nlohmann::json& j);

nlohmann::json presentation_to_json(const Presentation& p);
nlohmann::json session_to_json(const ExplorationSession& session,
                               const std::optional<Presentation>& current = std::nullopt);

nlohmann::json report_to_json(const ngram::RankedReport& report, std::string_view mode,
                              const std::optional<ngram::BestWorst>& envelope = std::nullopt);

// Thrown for documents that parse as JSON but do not match the schema.
[[noreturn]] void schema_error(const std::string& what);

}  // namespace latloc::json_io

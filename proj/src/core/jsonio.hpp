#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "core/bounds.hpp"
#include "core/conc.hpp"
#include "core/games.hpp"
#include "core/model.hpp"
#include "core/radcomp.hpp"
#include "core/value.hpp"

// JSON encoding of every configurable structure. All parsers fail with
// errc::parse and a message that names the offending JSON path (".T",
// ".payoff.values[0][1]"); `path` is the prefix for the node being parsed
// (empty at the config root). Serializers produce JSON the parsers accept
// back, value-identically.

namespace olab {

using Json = nlohmann::json;

// Text -> JSON with the parse error reported under `what`.
Json parse_json_text(const std::string& text, const std::string& what);

// --- access helpers (shared by the operation dispatcher) -------------------

// Required object member; "<path>.<key>: missing required field" otherwise.
const Json& jget(const Json& obj, const std::string& path, const char* key);
// Optional member: nullptr when absent or null.
const Json* jopt(const Json& obj, const char* key);
// Typed reads of the node itself.
double jnum(const Json& v, const std::string& path);
long long jint(const Json& v, const std::string& path);
std::uint64_t ju64(const Json& v, const std::string& path);
bool jbool(const Json& v, const std::string& path);
std::string jstr(const Json& v, const std::string& path);
Vec jvec(const Json& v, const std::string& path);    // array of numbers
Vec jkvec(const Json& v, const std::string& path);   // scalar allowed: x -> [x]
std::vector<Vec> jkvecs(const Json& v, const std::string& path);
// Rejects members outside `allowed` ("<path>.<key>: unknown field").
void jcheck_keys(const Json& obj, const std::string& path,
                 const std::vector<const char*>& allowed);

// --- core structures --------------------------------------------------------

// "l1" | "l2" | "linf" | {"kind":"lq","q":2.5}
NormSpec norm_from_json(const Json&, const std::string& path);
Json norm_to_json(const NormSpec&);

// A game is given inline ({"F","X","T","payoff","aggregator","transforms"})
// or built by a factory ({"make":{"family":...}}); mixing the two is an
// error. The returned game is validated. `game_keys()` lists the member
// names this reader consumes (for key checking at the config root).
GameSpec game_from_json(const Json&, const std::string& path);
Json game_to_json(const GameSpec&);
const std::vector<const char*>& game_keys();

LabeledTree labeled_tree_from_json(const Json&, const std::string& path);
Json labeled_tree_to_json(const LabeledTree&);
RealTree real_tree_from_json(const Json&, const std::string& path);
Json real_tree_to_json(const RealTree&);
std::vector<RealTree> real_trees_from_json(const Json&, const std::string& path);
VecTree vec_tree_from_json(const Json&, const std::string& path);
Json vec_tree_to_json(const VecTree&);
MdsSpec mds_from_json(const Json&, const std::string& path);
Json mds_to_json(const MdsSpec&);

PayoffTable payoff_from_json(const Json&, const std::string& path);
Json payoff_to_json(const PayoffTable&);
TargetSet target_from_json(const Json&, const std::string& path);
Json target_to_json(const TargetSet&);

GammaSpec gamma_from_json(const Json&, const std::string& path);
Json gamma_to_json(const GammaSpec&);

ConcParams conc_params_from_json(const Json&, const std::string& path);
BoundParams bound_params_from_json(const Json&, const std::string& path);
CombParams comb_params_from_json(const Json&, const std::string& path);
// {"rows":[[beta,log_cover],...]} or {"csv":"..."} or a CSV string.
CoverTable cover_table_from_json(const Json&, const std::string& path);

// {"kind":"minimax"|"uniform"|"best_response"} |
// {"kind":"fixed","actions":[...]} | {"kind":"table","table":{"f,x;...":[w]}}
PlayerPolicy player_policy_from_json(const Json&, const std::string& path, const GameSpec&);
AdversaryPolicy adversary_policy_from_json(const Json&, const std::string& path, const GameSpec&);
// Keys are history strings ("" for the root, else "f,x;f,x"); weights are a
// distribution over F (over_x=false) or X (over_x=true).
StrategyTable strategy_from_json(const Json&, const std::string& path, const GameSpec&,
                                 bool over_x);
Json strategy_to_json(const StrategyTable&);
History history_from_key(const std::string& key, const GameSpec&, const std::string& path);

// {"k":2,"forecasts":[[...],...],"outcomes":[0,1,...]} or {"csv":"..."}
CalibrationTranscript transcript_from_json(const Json&, const std::string& path);
Json transcript_to_json(const CalibrationTranscript&);

}  // namespace olab

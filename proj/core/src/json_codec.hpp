// Internal JSON codecs shared by checkpointing and the experiment harness.
// Not installed; include from core/src only.
#pragma once

#include <nlohmann/json.hpp>

#include "ltfu/dae.hpp"
#include "ltfu/dataset.hpp"
#include "ltfu/mice.hpp"
#include "ltfu/missingness.hpp"

namespace ltfu::codec {

using nlohmann::json;

std::string kind_name(ColumnKind k);
ColumnKind kind_from(const std::string& s);
std::string role_name(ColumnRole r);
ColumnRole role_from(const std::string& s);

json schema_to_json(const Schema& schema);
Schema schema_from_json(const json& j);

json dae_config_to_json(const DaeConfig& cfg);
DaeConfig dae_config_from_json(const json& j);

json mice_config_to_json(const MiceConfig& cfg);
MiceConfig mice_config_from_json(const json& j);

json loss_spec_to_json(const LossSpec& spec);
LossSpec loss_spec_from_json(const json& j);

}  // namespace ltfu::codec

#pragma once

#include "rom/program.hpp"

#include <string>

namespace rom {

/// Interfaces with their entries, implementations with their public signatures.
std::string dump_types(const Program& p);
/// Part trees, field partitions, method tables and multimethod families.
std::string dump_flattened(const Program& p);
/// One dispatch table per conforming (implementation, interface) pair.
std::string dump_dispatch(const Program& p);
/// `X <: I` per conforming pair.
std::string dump_subtypes(const Program& p);

}  // namespace rom

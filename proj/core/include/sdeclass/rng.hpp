#pragma once

#include <cstdint>
#include <random>

namespace sdeclass {

using Engine = std::mt19937_64;

/// Mixes (master, stream) into an independent 64-bit seed with two SplitMix64
/// finalizer rounds. Used everywhere a sub-seed is needed so that work items
/// (paths, repetitions, restarts) draw from streams that do not depend on the
/// order in which they are executed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Engine for stream `stream` of master seed `master`.
Engine make_stream(std::uint64_t master, std::uint64_t stream);

}  // namespace sdeclass

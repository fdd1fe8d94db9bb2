// SPDX-License-Identifier: Apache-2.0
//
// Bit-oriented to transparent (word-oriented) march test transformations.

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "twm/background.hpp"
#include "twm/march.hpp"

namespace twm {

enum class TransformStep {
  InitRemoved,
  ReadPrepended,
  TrailingReadAdded,
  RestoreAppended,
  AtmarchAppended,
};

enum class FinalState { SameAsInitial, Inverted };

std::string_view step_name(TransformStep step);
std::string_view final_state_name(FinalState state);

struct TransformTrace {
  MarchTest input;
  MarchTest smarch;   // solid-background word test (with trailing read)
  MarchTest tsmarch;  // its transparent form
  MarchTest atmarch;  // appended stripe-background elements
  MarchTest output;
  std::vector<TransformStep> steps;
  FinalState final_state = FinalState::SameAsInitial;
  unsigned width = 1;

  bool applied(TransformStep step) const;
};

/// Relabels every literal of a bit-oriented test as the solid all-0 / all-1
/// word. Throws EmptyMarchError on an empty test and std::invalid_argument if
/// any op is transparent.
MarchTest to_solid_background(const MarchTest& bmarch);

/// Appends `ud:(rX)` when the final op is `wX`.
MarchTest ensure_trailing_read(const MarchTest& smarch);

struct TransparentizeOptions {
  /// Append `ud:(r~D, wD)` when the test leaves cells inverted.
  bool restore = true;
};

/// Classic transparent transformation:
///  - a leading pure-write element is dropped, its final value becomes the
///    reference that maps to D;
///  - write-led elements get a read of the current content prepended;
///  - literals are relabelled (reference -> D@0, complement -> ~D@0);
///  - optionally a restoring element is appended.
/// Throws EmptyMarchError on an empty test, std::invalid_argument on
/// non-literal or striped input.
TransformTrace transparentize(const MarchTest& march,
                              TransparentizeOptions options = {});

/// Drops all writes, then any element left without ops.
MarchTest signature_prediction(const MarchTest& tmarch);

/// One `ud:(wD@i,w~D@i,r~D@i,wD@i,rD@i)` per stripe background, then
/// `ud:(wD@0)`. Specs are absolute (relative to the content at test start),
/// so the restoring write is wD@0 for either final state.
MarchTest build_atmarch(unsigned width, FinalState state);

/// to_solid_background -> ensure_trailing_read -> transparentize (no
/// restore) -> append build_atmarch. With width 1 there are no stripes and
/// the restoring element of transparentize is used instead.
TransformTrace twm_ta(const MarchTest& bmarch, unsigned width);

/// Per-background transparent expansion of a bit-oriented test (the
/// bit-by-bit transparent word scheme). `backgrounds` must be a_0, a_1, ...
/// in order. The first pass is the transparentized test; later passes keep
/// their initialization element; a final `ud:(wD@0)` restores the memory.
MarchTest expand_word_oriented(const MarchTest& bmarch,
                               std::span<const DataBackground> backgrounds);
MarchTest expand_word_oriented(const MarchTest& bmarch, unsigned width);

/// Nontransparent word reference for coverage comparison: the solid test
/// with its trailing read, followed by the stripe elements of build_atmarch
/// with every D@i replaced by the literal a_i.
MarchTest nontransparent_reference(const MarchTest& bmarch, unsigned width);

/// Replaces transparent specs by the corresponding literal pattern.
MarchTest literalize(const MarchTest& test);

}  // namespace twm

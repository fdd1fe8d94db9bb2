// SPDX-License-Identifier: Apache-2.0

#include "twm/transform.hpp"

#include <algorithm>
#include <stdexcept>

namespace twm {

namespace {

void require_nonempty(const MarchTest& test) {
  if (test.empty()) throw EmptyMarchError();
}

void require_plain_literals(const MarchTest& test, const char* who) {
  for (const auto& e : test.elements)
    for (const auto& op : e.ops)
      if (op.data.transparent() || op.data.background != 0)
        throw std::invalid_argument(std::string(who) +
                                    ": expected 0/1 literal data only, got " +
                                    format_op(op));
}

bool all_writes(const MarchElement& e) {
  return std::all_of(e.ops.begin(), e.ops.end(),
                     [](const MarchOp& op) { return op.is_write(); });
}

// Value the initialization element leaves behind; it maps to D.
struct Reference {
  bool drop_init = false;
  DataSpec value = DataSpec::zero();
};

Reference find_reference(const MarchTest& test) {
  Reference ref;
  const auto& first = test.elements.front();
  if (test.elements.size() > 1 && all_writes(first)) {
    ref.drop_init = true;
    ref.value = first.ops.back().data;
  }
  return ref;
}

DataSpec relabel(const DataSpec& literal, const DataSpec& reference,
                 unsigned background) {
  return DataSpec::initial(background,
                           literal.complemented != reference.complemented);
}

MarchTest concat(MarchTest head, const MarchTest& tail) {
  head.elements.insert(head.elements.end(), tail.elements.begin(),
                       tail.elements.end());
  return head;
}

}  // namespace

std::string_view step_name(TransformStep step) {
  switch (step) {
    case TransformStep::InitRemoved:
      return "INIT_REMOVED";
    case TransformStep::ReadPrepended:
      return "READ_PREPENDED";
    case TransformStep::TrailingReadAdded:
      return "TRAILING_READ_ADDED";
    case TransformStep::RestoreAppended:
      return "RESTORE_APPENDED";
    case TransformStep::AtmarchAppended:
      return "ATMARCH_APPENDED";
  }
  return "?";
}

std::string_view final_state_name(FinalState state) {
  return state == FinalState::Inverted ? "INVERTED" : "SAME_AS_INITIAL";
}

bool TransformTrace::applied(TransformStep step) const {
  return std::find(steps.begin(), steps.end(), step) != steps.end();
}

MarchTest to_solid_background(const MarchTest& bmarch) {
  require_nonempty(bmarch);
  require_plain_literals(bmarch, "to_solid_background");
  MarchTest out = bmarch;
  out.orientation = Orientation::Word;
  return out;
}

MarchTest ensure_trailing_read(const MarchTest& smarch) {
  require_nonempty(smarch);
  MarchTest out = smarch;
  const MarchOp& last = smarch.last_op();
  if (last.is_write())
    out.elements.push_back({AddressOrder::Any, {MarchOp::read(last.data)}});
  return out;
}

TransformTrace transparentize(const MarchTest& march,
                              TransparentizeOptions options) {
  require_nonempty(march);
  require_plain_literals(march, "transparentize");

  TransformTrace trace;
  trace.input = march;
  trace.smarch = march;

  const Reference ref = find_reference(march);
  if (ref.drop_init) trace.steps.push_back(TransformStep::InitRemoved);

  MarchTest out;
  out.orientation = march.orientation;
  DataSpec state = DataSpec::initial();
  bool prepended = false;
  for (std::size_t i = ref.drop_init ? 1 : 0; i < march.elements.size();
       ++i) {
    const MarchElement& src = march.elements[i];
    MarchElement dst{src.order, {}};
    if (src.ops.front().is_write()) {
      dst.ops.push_back(MarchOp::read(state));
      prepended = true;
    }
    for (const MarchOp& op : src.ops) {
      dst.ops.push_back({op.action, relabel(op.data, ref.value, 0)});
      if (op.is_write()) state = dst.ops.back().data;
    }
    out.elements.push_back(std::move(dst));
  }
  if (prepended) trace.steps.push_back(TransformStep::ReadPrepended);

  trace.final_state = state.complemented ? FinalState::Inverted
                                         : FinalState::SameAsInitial;
  if (options.restore && trace.final_state == FinalState::Inverted) {
    out.elements.push_back(
        {AddressOrder::Any,
         {MarchOp::read(DataSpec::initial(0, true)),
          MarchOp::write(DataSpec::initial())}});
    trace.steps.push_back(TransformStep::RestoreAppended);
  }

  trace.tsmarch = out;
  trace.output = std::move(out);
  return trace;
}

MarchTest signature_prediction(const MarchTest& tmarch) {
  MarchTest out;
  out.orientation = tmarch.orientation;
  for (const auto& e : tmarch.elements) {
    MarchElement kept{e.order, {}};
    for (const auto& op : e.ops)
      if (op.is_read()) kept.ops.push_back(op);
    if (!kept.ops.empty()) out.elements.push_back(std::move(kept));
  }
  return out;
}

MarchTest build_atmarch(unsigned width, FinalState /*state*/) {
  if (width == 0) throw std::invalid_argument("word width must be >= 1");
  MarchTest out;
  out.orientation = Orientation::Word;
  for (unsigned i = 1; i <= ceil_log2(width); ++i) {
    const DataSpec a = DataSpec::initial(i);
    const DataSpec not_a = DataSpec::initial(i, true);
    out.elements.push_back({AddressOrder::Any,
                            {MarchOp::write(a), MarchOp::write(not_a),
                             MarchOp::read(not_a), MarchOp::write(a),
                             MarchOp::read(a)}});
  }
  out.elements.push_back(
      {AddressOrder::Any, {MarchOp::write(DataSpec::initial())}});
  return out;
}

TransformTrace twm_ta(const MarchTest& bmarch, unsigned width) {
  require_nonempty(bmarch);
  if (width == 0) throw std::invalid_argument("word width must be >= 1");

  const MarchTest solid = to_solid_background(bmarch);
  const MarchTest smarch = ensure_trailing_read(solid);
  const bool stripes = ceil_log2(width) > 0;

  TransformTrace trace = transparentize(smarch, {.restore = !stripes});
  trace.input = bmarch;
  trace.smarch = smarch;
  trace.width = width;
  if (smarch != solid)
    trace.steps.insert(trace.steps.begin(), TransformStep::TrailingReadAdded);

  if (stripes) {
    trace.atmarch = build_atmarch(width, trace.final_state);
    trace.output = concat(trace.tsmarch, trace.atmarch);
    trace.steps.push_back(TransformStep::AtmarchAppended);
  }
  trace.output.orientation = Orientation::Word;
  return trace;
}

MarchTest expand_word_oriented(const MarchTest& bmarch,
                               std::span<const DataBackground> backgrounds) {
  require_nonempty(bmarch);
  if (backgrounds.empty())
    throw std::invalid_argument("expand_word_oriented: no backgrounds");
  require_plain_literals(bmarch, "expand_word_oriented");

  const unsigned width = backgrounds.front().width();
  for (std::size_t k = 0; k < backgrounds.size(); ++k) {
    if (k > ceil_log2(width) ||
        backgrounds[k] != background_pattern(static_cast<unsigned>(k), width))
      throw std::invalid_argument(
          "expand_word_oriented: background " + std::to_string(k) +
          " must be a_" + std::to_string(k) + " of width " +
          std::to_string(width));
  }

  MarchTest out =
      transparentize(bmarch, {.restore = false}).output;
  out.orientation = Orientation::Word;

  const Reference ref = find_reference(bmarch);
  for (std::size_t k = 1; k < backgrounds.size(); ++k) {
    for (const auto& src : bmarch.elements) {
      MarchElement dst{src.order, {}};
      for (const auto& op : src.ops)
        dst.ops.push_back(
            {op.action,
             relabel(op.data, ref.value, static_cast<unsigned>(k))});
      out.elements.push_back(std::move(dst));
    }
  }
  out.elements.push_back(
      {AddressOrder::Any, {MarchOp::write(DataSpec::initial())}});
  return out;
}

MarchTest expand_word_oriented(const MarchTest& bmarch, unsigned width) {
  const auto set = background_set(width);
  return expand_word_oriented(bmarch, set);
}

MarchTest literalize(const MarchTest& test) {
  MarchTest out = test;
  for (auto& e : out.elements)
    for (auto& op : e.ops) op.data.kind = DataKind::Literal;
  return out;
}

MarchTest nontransparent_reference(const MarchTest& bmarch, unsigned width) {
  MarchTest at = build_atmarch(width, FinalState::SameAsInitial);
  at.elements.pop_back();
  return concat(ensure_trailing_read(to_solid_background(bmarch)),
                literalize(at));
}

}  // namespace twm

#pragma once

// Registry of live foreign objects handed to the host as opaque handles.
//
// Raw addresses are never exposed: a handle is (slot index, nonce, class).
// Every unbox re-validates the nonce against the slot, so forged, stale or
// mistyped handles become typed InterpErrors instead of wild pointers.
// Boxing the same foreign object twice yields the same handle.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gluec/api_model.hpp"
#include "gluec/value.hpp"

namespace gluec {

// Foreign-side object reference; 0 is the null reference.
struct ForeignRef {
  std::uint64_t id = 0;

  bool is_null() const { return id == 0; }
  friend bool operator==(const ForeignRef&, const ForeignRef&) = default;
};

class HandleRegistry {
 public:
  explicit HandleRegistry(std::uint64_t seed = std::random_device{}()) : rng_(seed) {}

  Value box(ForeignRef ref, std::string_view cls) {
    if (ref.is_null()) throw std::logic_error("HandleRegistry::box: null foreign reference");
    if (auto existing = find(ref)) return Value::handle(*existing);

    std::uint64_t nonce;
    do {
      nonce = rng_();
    } while (!live_nonces_.insert(nonce).second);

    std::size_t index;
    if (!free_.empty()) {
      index = free_.back();
      free_.pop_back();
    } else {
      index = slots_.size();
      slots_.emplace_back();
    }
    Slot& slot = slots_[index];
    slot.nonce = nonce;
    slot.cls = std::string(cls);
    slot.ref = ref;
    by_ref_[ref.id] = index;
    ++live_;
    return Value::handle(HandleId{index, nonce, slot.cls});
  }

  // Slot validity only: the slot is live, its nonce matches and the class
  // tag is the one it was registered with.
  const ForeignRef* resolve(const HandleId& h) const {
    if (h.index >= slots_.size()) return nullptr;
    const Slot& slot = slots_[static_cast<std::size_t>(h.index)];
    if (!slot.ref || slot.nonce != h.nonce || slot.cls != h.cls) return nullptr;
    return &*slot.ref;
  }

  ForeignRef unbox(const ApiCorpus& corpus, const Value& v, std::string_view expected_class) const {
    if (!v.is_handle())
      throw InterpError(InterpError::Kind::TypeMismatch,
                        "expected a " + std::string(expected_class) + " handle, got " + std::string(kind_name(v.kind())));
    const HandleId& h = v.as_handle();
    const ForeignRef* ref = resolve(h);
    if (!ref) throw InterpError(InterpError::Kind::StaleHandle, "handle " + to_string(v) + " is not live");
    if (!corpus.find_object(h.cls) || !corpus.find_object(expected_class) ||
        !object_is_a(corpus, h.cls, expected_class))
      throw InterpError(InterpError::Kind::ClassMismatch,
                        "handle of class " + h.cls + " is not a " + std::string(expected_class));
    return *ref;
  }

  bool release(const HandleId& h) {
    if (!resolve(h)) return false;
    Slot& slot = slots_[static_cast<std::size_t>(h.index)];
    by_ref_.erase(slot.ref->id);
    live_nonces_.erase(slot.nonce);
    slot.ref.reset();
    free_.push_back(static_cast<std::size_t>(h.index));
    --live_;
    return true;
  }

  std::optional<HandleId> find(ForeignRef ref) const {
    auto it = by_ref_.find(ref.id);
    if (it == by_ref_.end()) return std::nullopt;
    const Slot& slot = slots_[it->second];
    return HandleId{it->second, slot.nonce, slot.cls};
  }

  std::size_t live_count() const { return live_; }
  std::size_t slot_count() const { return slots_.size(); }

 private:
  struct Slot {
    std::uint64_t nonce = 0;
    std::string cls;
    std::optional<ForeignRef> ref;  // vacant when empty
  };

  std::vector<Slot> slots_;
  std::vector<std::size_t> free_;
  std::unordered_map<std::uint64_t, std::size_t> by_ref_;
  std::unordered_set<std::uint64_t> live_nonces_;
  std::mt19937_64 rng_;
  std::size_t live_ = 0;
};

}  // namespace gluec

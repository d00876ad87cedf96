#pragma once

// Internal helpers for proof search: linear chains of structural steps and the
// "bank" view of bangs that can be duplicated, dropped and moved at will.

#include <optional>
#include <vector>

#include "actomega/derivation.hpp"

namespace actomega::detail {

// A stack of rule applications read upward from a conclusion. Every step has one
// continuing premise; any other premise must be an axiom A |- A.
class Chain {
 public:
  Chain() = default;
  explicit Chain(Sequent s) : cur_(std::move(s)) {}

  const Sequent& current() const { return cur_; }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }

  // Applies r to current(); premise `main` becomes the new current sequent.
  void apply(const RuleInstance& r, std::size_t main = 0);
  // Puts the chain below `top`, whose conclusion must be current().
  Derivation close(Derivation top) const;

 private:
  struct Step {
    Sequent concl;
    RuleInstance rule;
    std::size_t main;
    std::vector<Sequent> side;
  };
  Sequent cur_;
  std::vector<Step> steps_;
};

// A bang !l X counts as free in a sequent when l is contractible and the bang can be
// discarded: either l is weakenable, or the sequent contains a canceller pair
// K = !c(1 / H) together with H (both contractible), K and H being the pair members.
class Bank {
 public:
  explicit Bank(const SubexpSignature& sig);
  bool enabled() const { return enabled_; }

  std::vector<bool> free_flags(const std::vector<Formula>& ant) const;

  // Canonical form: distinct free bangs first in a fixed order, then the rest in order.
  // Returns the canonical sequent and the size of its free block.
  std::pair<Sequent, std::size_t> normalize(const Sequent& s) const;
  // Structural steps leading from s up to normalize(s).first.
  Chain canonical_chain(const Sequent& s) const;

  // On a canonical current sequent with free block size zc: remove the block members
  // for which drop[i] holds. Returns the new block size.
  std::size_t drop_members(Chain& ch, std::size_t zc, const std::vector<bool>& drop) const;
  // Inserts copies of the free block [0, zc) at index at (at >= zc).
  void copy_block(Chain& ch, std::size_t zc, std::size_t at) const;

 private:
  // Deletes the (free) bang at index i of ch.current(), using partners that stay present.
  void delete_at(Chain& ch, std::size_t i, std::size_t block_end) const;
  std::optional<Formula> canceller_target(const Formula& f) const;

  const SubexpSignature* sig_;
  bool enabled_ = false;
};

// Every non-permutation rule instance concluding s (no cut, no mix, no omega premises).
void core_rules(const Sequent& s, const SubexpSignature& sig, std::vector<RuleInstance>& out);

}  // namespace actomega::detail

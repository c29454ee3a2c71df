#pragma once

namespace formlab {

// Shape of Aut(F, Q): {Id}, {Id, -Id}, a Klein four-group, or anything else.
enum class AutClass { Trivial, PlusMinus, Klein, Other };

}  // namespace formlab

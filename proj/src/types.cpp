#include "gammareg/types.hpp"

// Validation lives in the header (constructors); this translation unit
// exists so the library has a home for any future out-of-line members.

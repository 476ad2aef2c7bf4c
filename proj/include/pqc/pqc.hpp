#ifndef PQC_PQC_HPP
#define PQC_PQC_HPP

// Convenience header pulling in the whole library.

#include "pqc/bloch.hpp"
#include "pqc/channel.hpp"
#include "pqc/cli.hpp"
#include "pqc/errors.hpp"
#include "pqc/serialize.hpp"
#include "pqc/synth.hpp"
#include "pqc/verify.hpp"

#endif

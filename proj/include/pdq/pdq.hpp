#ifndef PDQ_PDQ_HPP
#define PDQ_PDQ_HPP

#include "pdq/core.hpp"
#include "pdq/latin.hpp"
#include "pdq/onefact.hpp"
#include "pdq/format.hpp"
#include "pdq/verify.hpp"
#include "pdq/constructions.hpp"
#include "pdq/io.hpp"
#include "pdq/search.hpp"

#endif  // PDQ_PDQ_HPP

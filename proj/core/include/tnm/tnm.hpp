#pragma once

#include "tnm/castling.hpp"
#include "tnm/classify.hpp"
#include "tnm/datum.hpp"
#include "tnm/error.hpp"
#include "tnm/exact.hpp"
#include "tnm/io.hpp"
#include "tnm/mle.hpp"
#include "tnm/scan.hpp"
#include "tnm/tensor.hpp"

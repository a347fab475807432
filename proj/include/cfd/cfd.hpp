#pragma once

#include "cfd/error.hpp"
#include "cfd/limits.hpp"
#include "cfd/field.hpp"
#include "cfd/poly.hpp"
#include "cfd/modulus.hpp"
#include "cfd/parse.hpp"
#include "cfd/carlitz.hpp"
#include "cfd/lambda.hpp"
#include "cfd/differentials.hpp"
#include "cfd/galois.hpp"
#include "cfd/gaps.hpp"
#include "cfd/oracle.hpp"
#include "cfd/verify.hpp"

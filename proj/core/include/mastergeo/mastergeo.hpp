#pragma once

#include "mastergeo/contact.hpp"
#include "mastergeo/csv.hpp"
#include "mastergeo/error.hpp"
#include "mastergeo/exp_family.hpp"
#include "mastergeo/legendre.hpp"
#include "mastergeo/master.hpp"
#include "mastergeo/moments.hpp"
#include "mastergeo/ode.hpp"
#include "mastergeo/types.hpp"
#include "mastergeo/random.hpp"

#ifndef TORIX_TORIX_HPP
#define TORIX_TORIX_HPP

#include "torix/bundle.hpp"
#include "torix/errors.hpp"
#include "torix/fan.hpp"
#include "torix/generate.hpp"
#include "torix/git.hpp"
#include "torix/json_io.hpp"
#include "torix/linalg.hpp"
#include "torix/rational.hpp"
#include "torix/resolution.hpp"
#include "torix/sheaf.hpp"

#endif

#ifndef OMNIDRIS_OMNIDRIS_HPP
#define OMNIDRIS_OMNIDRIS_HPP

#include "channel.hpp"
#include "cubic.hpp"
#include "json_io.hpp"
#include "optimizer.hpp"
#include "rate_model.hpp"
#include "reports.hpp"
#include "scenario.hpp"
#include "sweep.hpp"

#endif // OMNIDRIS_OMNIDRIS_HPP

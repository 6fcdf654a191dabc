// Copyright (c) 2026 storelens contributors
// SPDX-License-Identifier: Apache-2.0

#include "storelens/scenario.hpp"

#include "storelens/errors.hpp"

namespace storelens {

void inject(Scenario& scenario, const Topology& topo, const FaultSpec& fault) {
    if (!topo.contains(fault.target)) {
        throw NotFoundError("fault target does not exist: " + fault.target.str());
    }
    if (fault.start_epoch > fault.end_epoch) throw SpecError("fault start exceeds its end");
    if (fault.start_epoch < 0 || fault.end_epoch >= scenario.horizon_epochs) {
        throw SpecError("fault window falls outside the scenario horizon");
    }
    if (!(fault.severity > 0.0 && fault.severity <= 1.0)) {
        throw SpecError("fault severity must lie in (0, 1]");
    }
    scenario.faults.push_back(fault);
}

}  // namespace storelens

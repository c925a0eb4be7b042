/** \file
 * Stacking capacity resolution shared by schedulers and the validator.
 */
#include "qsched/options.hpp"

namespace qsched {

int max_stacking_for(const PlatformConfig &platform, const SchedulerOptions &options,
                     int type_index, int instance) {
    const InstrumentType &type = platform.type(type_index);
    auto it = options.max_stacking.find({type.name, instance});
    if (it != options.max_stacking.end()) {
        return it->second;
    }
    if (type.max_stacking_override[static_cast<size_t>(instance)] > 0) {
        return options.stacking_enabled
                   ? type.max_stacking_override[static_cast<size_t>(instance)]
                   : 1;
    }
    if (!options.stacking_enabled || type.stacking_rule == StackingRule::Exclusive) {
        return 1;
    }
    return std::max<int>(1, static_cast<int>(
                                type.connection_map[static_cast<size_t>(instance)].size()));
}

} // namespace qsched

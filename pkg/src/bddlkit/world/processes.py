"""Continuous processes: heat exchange and wetting.

Updates are synchronous (every object reads the pre-step state), so
iteration order never matters.  Temperature follows a first-order pull
toward the nearest active source::

    T' = T + rate * (T_source - T) * dt

where the source is the first active heat or cold source on the
object's support/containment chain, or the ambient temperature when
there is none.  Objects inside a running water source gain wetness at
a fixed rate.
"""

from __future__ import annotations

from dataclasses import replace

from bddlkit.errors import WorldError
from bddlkit.syntax.ast import ConstantName
from bddlkit.world.state import ObjectInstance, SceneState


def _active_source_temp(state: SceneState, name: ConstantName) -> float:
    for parent in state.placement_chain(name):
        obj = state.objects[parent]
        if obj.source_temp_c is not None and obj.ext.toggled_on:
            return obj.source_temp_c
    return state.config.ambient_temp_c


def _in_running_water(state: SceneState, name: ConstantName) -> bool:
    for parent in state.containment_chain(name):
        obj = state.objects[parent]
        if obj.water_source and obj.ext.toggled_on:
            return True
    return False


def advance_dynamics(state: SceneState, dt: float) -> SceneState:
    """Apply ``dt`` seconds of process dynamics without touching the clock."""
    if dt < 0:
        raise WorldError(f"dt must be non-negative: {dt}")
    if dt == 0:
        return state
    rate = state.config.heat_transfer_rate
    wet_rate = state.config.wetting_rate
    objects: dict[ConstantName, ObjectInstance] = {}
    for name, obj in state.objects.items():
        target = _active_source_temp(state, name)
        temp = obj.ext.temp_c + rate * (target - obj.ext.temp_c) * dt
        ext = obj.ext.with_temperature(temp)
        if _in_running_water(state, name):
            ext = replace(ext, wetness=min(1.0, ext.wetness + wet_rate * dt))
        objects[name] = replace(obj, ext=ext)
    return replace(state, objects=objects)


def step_processes(state: SceneState, dt: float) -> SceneState:
    """One simulation step of ``dt`` seconds: dynamics plus clock."""
    advanced = advance_dynamics(state, dt)
    return replace(advanced, clock_s=state.clock_s + dt)

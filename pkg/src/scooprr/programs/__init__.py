from .lang import (
    TRUE,
    Call,
    ClassDef,
    Compute,
    Create,
    Field,
    If,
    Local,
    NonSeparateCall,
    Predicate,
    Query,
    Repeat,
    Routine,
    Scenario,
    SeparateBlock,
    SetField,
)
from .scenarios import (
    SCENARIOS,
    get_scenario,
    scenario_fig1_transaction,
    scenario_market_deadlock,
    scenario_producer_consumer,
)

__all__ = [
    "SCENARIOS",
    "TRUE",
    "Call",
    "ClassDef",
    "Compute",
    "Create",
    "Field",
    "If",
    "Local",
    "NonSeparateCall",
    "Predicate",
    "Query",
    "Repeat",
    "Routine",
    "Scenario",
    "SeparateBlock",
    "SetField",
    "get_scenario",
    "scenario_fig1_transaction",
    "scenario_market_deadlock",
    "scenario_producer_consumer",
]

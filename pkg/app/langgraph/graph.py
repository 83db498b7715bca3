from langgraph.graph import StateGraph, END
from app.langgraph.state import ExperimentState

# Import Nodes
from app.langgraph.nodes.load_config import load_config_node
from app.langgraph.nodes.run_experiment import (
    noise_sweep_node,
    simulate_qrm_node,
    verify_gates_node,
    verify_protection_node,
)
from app.langgraph.nodes.evaluate_report import evaluate_report_node
from app.langgraph.nodes.write_report import write_report_node

RUN_NODES = {
    "verify-gates": "verify_gates",
    "verify-protection": "verify_protection",
    "simulate-qrm": "simulate_qrm",
    "noise-sweep": "noise_sweep",
}

workflow = StateGraph(ExperimentState)

# Add Nodes
workflow.add_node("load_config", load_config_node)
workflow.add_node("verify_gates", verify_gates_node)
workflow.add_node("verify_protection", verify_protection_node)
workflow.add_node("simulate_qrm", simulate_qrm_node)
workflow.add_node("noise_sweep", noise_sweep_node)
workflow.add_node("evaluate_report", evaluate_report_node)
workflow.add_node("write_report", write_report_node)

# Set Entry Point
workflow.set_entry_point("load_config")

# Edge: Load Config -> one run node per experiment kind (or End on a config error)
def route_after_config(state: ExperimentState):
    if state.get("error"):
        return "end"
    return RUN_NODES[state["config"].experiment.value]

workflow.add_conditional_edges(
    "load_config",
    route_after_config,
    {
        "verify_gates": "verify_gates",
        "verify_protection": "verify_protection",
        "simulate_qrm": "simulate_qrm",
        "noise_sweep": "noise_sweep",
        "end": END,
    }
)

# Edge: Run -> Evaluate (or End when the run aborted)
def route_after_run(state: ExperimentState):
    if state.get("error"):
        return "end"
    return "evaluate_report"

for node in RUN_NODES.values():
    workflow.add_conditional_edges(
        node,
        route_after_run,
        {
            "evaluate_report": "evaluate_report",
            "end": END,
        }
    )

# Edge: Evaluate -> Write -> END
workflow.add_edge("evaluate_report", "write_report")
workflow.add_edge("write_report", END)

# Compile
graph = workflow.compile()

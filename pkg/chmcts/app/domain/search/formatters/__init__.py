"""
Search Domain Formatters

- TreeSnapshotJSONFormatter: 디버그용 트리 스냅샷 (너비 우선, 노드 수 상한)
- SearchResultJSONFormatter: search 명령 결과 JSON
"""

from collections import deque
from typing import Any

from chmcts.app.shared.base import JSONFormatter
from chmcts.app.domain.geometry.schemas import TextOutput
from chmcts.app.domain.search.models import ChanceNode, DecisionNode
from chmcts.app.domain.search.schemas import SearchReportInput, SnapshotInput


class TreeSnapshotJSONFormatter(JSONFormatter[SnapshotInput, TextOutput]):
    """
    노드 목록: id, parent, kind, state, depth, visits, labelled, points (+ action)

    상한에 걸리면 truncated = true.
    """

    async def format(self, input_data: SnapshotInput) -> TextOutput:
        tree = input_data.tree
        nodes: list[dict[str, Any]] = []
        queue: deque[tuple[DecisionNode | ChanceNode, int | None]] = deque([(tree.root, None)])
        truncated = False
        while queue:
            if len(nodes) >= input_data.node_limit:
                truncated = True
                break
            node, parent = queue.popleft()
            node_id = len(nodes)
            entry: dict[str, Any] = {
                "id": node_id,
                "parent": parent,
                "state": node.state,
                "depth": node.depth,
                "visits": node.visit_count,
                "labelled": node.labelled,
            }
            if isinstance(node, DecisionNode):
                entry["kind"] = "decision"
                entry["points"] = node.value_set.to_list()
                children = [node.children[a] for a in sorted(node.children)]
            else:
                entry["kind"] = "chance"
                entry["action"] = node.action
                entry["points"] = node.q_set.to_list()
                children = [node.children[s] for s in sorted(node.children)]
            nodes.append(entry)
            queue.extend((child, node_id) for child in children)

        document = {
            "model": input_data.model_name,
            "prune": tree.prune_mode.value,
            "decision_nodes": tree.node_count,
            "truncated": truncated,
            "nodes": nodes,
        }
        return TextOutput(content=self.dumps(document), media_type="application/json")


class SearchResultJSONFormatter(JSONFormatter[SearchReportInput, TextOutput]):
    async def format(self, input_data: SearchReportInput) -> TextOutput:
        response = input_data.response
        document = {
            "model": response.model,
            "strategy": response.strategy,
            "prune": response.prune.value,
            "stats": response.stats,
            "root_ccs": response.front.points,
            "hypervolume": response.front.hypervolume,
            "reference_point": response.front.reference_point,
            "matches_exact": response.matches_exact,
        }
        return TextOutput(
            content=self.dumps(self.remove_null_fields(document)),
            media_type="application/json",
        )


__all__ = ["TreeSnapshotJSONFormatter", "SearchResultJSONFormatter"]

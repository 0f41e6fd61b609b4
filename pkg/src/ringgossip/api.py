"""HTTP control service for steering a live simulation.

One network per process. All state-mutating commands are serialized
through a single lock into the same engine the CLI uses, so API-driven
runs and scenario-file runs replay identically. Events stream out as
JSON Lines with a ?since= cursor for polling clients.
"""

from __future__ import annotations

import json
import threading
from typing import Any, List, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel, Field

from ringgossip import scenario as sc
from ringgossip.harness import Simulation
from ringgossip.merger import assign_fragment_ids, partitions_converged
from ringgossip.node import responsible_node
from ringgossip.ring import hash_name
from ringgossip.scenario import Scenario, ScenarioError, ScheduledEvent


class NetworkRequest(BaseModel):
    n: int = Field(ge=1)
    m: Optional[int] = None
    id_mode: str = "dense"
    seed: int = 0


class SplitRequest(BaseModel):
    fragments: List[List[int]] = Field(min_length=2)


class HealRequest(BaseModel):
    partitions: Any = "all"


class StepRequest(BaseModel):
    rounds: int = Field(ge=1)


class PublishRequest(BaseModel):
    node: int
    name: str = Field(min_length=1)
    ip: str
    ttl: int = Field(ge=1)


class LookupRequest(BaseModel):
    origin: int
    name: str = Field(min_length=1)


class Controller:
    def __init__(self, initial: Optional[Scenario] = None):
        self._lock = threading.Lock()
        self._wakeup = threading.Condition(self._lock)
        self.sim: Optional[Simulation] = None
        self.network_id = 0
        if initial is not None:
            self.sim = Simulation(initial)
            self.network_id = 1

    def require_sim(self) -> Simulation:
        if self.sim is None:
            raise HTTPException(status_code=409, detail="no network created yet")
        return self.sim

    def create(self, req: NetworkRequest) -> int:
        with self._lock:
            scn = Scenario.build(
                n=req.n, seed=req.seed, m=req.m, id_mode=req.id_mode, max_rounds=10**9
            )
            self.sim = Simulation(scn)
            self.network_id += 1
            self._wakeup.notify_all()
            return self.network_id


def create_app(initial: Optional[Scenario] = None) -> FastAPI:
    app = FastAPI(title="ringgossip control api")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    ctl = Controller(initial)
    app.state.controller = ctl

    @app.exception_handler(ScenarioError)
    async def scenario_error(_, exc: ScenarioError):
        from fastapi.responses import JSONResponse

        return JSONResponse(
            status_code=400,
            content={"detail": str(exc), "field": exc.field_path},
        )

    @app.post("/network", status_code=201)
    def create_network(req: NetworkRequest):
        network_id = ctl.create(req)
        return {"network_id": network_id}

    @app.post("/split")
    def split(req: SplitRequest):
        # queued into the next round's event slot so API-driven runs
        # replay exactly like scenario files; the response previews the
        # fragment ids the split will assign
        with ctl._lock:
            sim = ctl.require_sim()
            try:
                assignment = assign_fragment_ids(req.fragments)
            except ValueError as exc:
                raise ScenarioError("split.fragments", str(exc)) from None
            live = {i for i in sim.ids if sim.fault.is_active(i)}
            if set(assignment) != live:
                raise ScenarioError(
                    "split.fragments", "fragments must cover the live node set exactly"
                )
            sim.inject(
                ScheduledEvent(round=sim.round + 1, kind=sc.SPLIT, fragments=req.fragments)
            )
            ctl._wakeup.notify_all()
            return {
                "partition_ids": sorted(set(assignment.values())),
                "applies_round": sim.round + 1,
            }

    @app.post("/heal")
    def heal(req: HealRequest):
        partitions = req.partitions
        if partitions != "all" and not (
            isinstance(partitions, list) and all(isinstance(p, int) for p in partitions)
        ):
            raise HTTPException(
                status_code=400, detail='partitions must be "all" or a list of ids'
            )
        with ctl._lock:
            sim = ctl.require_sim()
            labels = sim.fault.fragment_labels()
            if partitions == "all":
                resolved = labels
            else:
                unknown = [p for p in partitions if p not in labels]
                if unknown:
                    raise ScenarioError(
                        "heal.partitions", f"no such fragments {unknown}; have {labels}"
                    )
                resolved = sorted(partitions)
            sim.inject(
                ScheduledEvent(round=sim.round + 1, kind=sc.HEAL, partitions=partitions)
            )
            ctl._wakeup.notify_all()
            return {"partitions": resolved, "applies_round": sim.round + 1}

    @app.post("/step")
    def step(req: StepRequest):
        with ctl._lock:
            sim = ctl.require_sim()
            rows = [sim.step_round() for _ in range(req.rounds)]
            ctl._wakeup.notify_all()
            active = sum(1 for i in sim.ids if sim.fault.is_active(i))
            return {
                "round": sim.round,
                "metrics": [
                    {
                        "round": m.round,
                        "gossip_sent": m.gossip_msgs_sent,
                        "record_sent": m.record_msgs_sent,
                        "baseline_sent": m.baseline_msgs_sent,
                        "baseline_reference": 3 * active,
                        "components": m.components,
                        "converged": m.all_converged,
                        "violations": len(m.violations),
                        "merge_decisions": m.merge_decisions,
                    }
                    for m in rows
                ],
            }

    @app.post("/publish")
    def publish(req: PublishRequest):
        with ctl._lock:
            sim = ctl.require_sim()
            if req.node not in sim.states:
                raise ScenarioError("publish.node", f"unknown node {req.node}")
            sim.inject(
                ScheduledEvent(
                    round=sim.round + 1,
                    kind=sc.PUBLISH,
                    node=req.node,
                    name=req.name,
                    ip=req.ip,
                    ttl=req.ttl,
                )
            )
            ctl._wakeup.notify_all()
            return {"queued_for_round": sim.round + 1, "name": req.name}

    @app.post("/lookup")
    def lookup(req: LookupRequest):
        # read-only: resolves against the settled state right now
        with ctl._lock:
            sim = ctl.require_sim()
            if req.origin not in sim.states:
                raise ScenarioError("lookup.origin", f"unknown node {req.origin}")
            record = sim.lookup_now(req.origin, req.name)
            ctl._wakeup.notify_all()
            out = dict(record)
            out.pop("type", None)
            if "record" in out:
                owner = out["path"][-1] if out["path"] else None
                key = hash_name(req.name, sim.cfg)
                live = [i for i in sim.ids if sim.fault.is_active(i)]
                global_owner = responsible_node(key, set(live), sim.cfg) if live else None
                out["authoritative"] = owner == global_owner
            return out

    @app.get("/state")
    def state():
        with ctl._lock:
            sim = ctl.require_sim()
            components = sim.fault.components()
            converged = partitions_converged(sim.states, components)
            nodes = []
            for node_id in sim.ids:
                st = sim.states[node_id]
                nodes.append(
                    {
                        "id": node_id,
                        "partition": st.partition_id,
                        "partitionVersion": st.partition_version,
                        "active": st.active,
                        "successor": st.successor,
                        "predecessor": st.predecessor,
                        "fingers": [
                            {
                                "k": f.k,
                                "start": f.start,
                                "target": f.target,
                                "invalid": f.target is None,
                            }
                            for f in st.fingers
                        ],
                        "crossPartitionLinks": sorted(st.cross_partition_links),
                        "knownCount": len(st.known_nodes),
                        "vv": st.vv.digest(),
                        "records": len(st.dns_records),
                    }
                )
            return {
                "network_id": ctl.network_id,
                "round": sim.round,
                "n": sim.scenario.n,
                "m": sim.cfg.m,
                "converged": all(converged.values()) if converged else False,
                "components": len(components),
                "nodes": nodes,
            }

    @app.get("/events", response_class=PlainTextResponse)
    def events(since: int = Query(default=0, ge=0), wait_ms: int = Query(default=0, ge=0, le=30000)):
        deadline = wait_ms / 1000.0
        with ctl._lock:
            sim = ctl.require_sim()
            if wait_ms and len(sim.event_log) <= since:
                ctl._wakeup.wait(timeout=deadline)
            lines = [
                json.dumps(rec, separators=(",", ":")) for rec in sim.event_log[since:]
            ]
        return "\n".join(lines) + ("\n" if lines else "")

    return app

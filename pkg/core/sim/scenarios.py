"""
評估用的需求情境：requested pod 數與 pod 形狀的笛卡兒積，再加上幾組不規則形狀。
"""
from __future__ import annotations

import itertools
from typing import List

from core.model import PodSpec, Workload

POD_COUNTS = (10, 50, 100, 400, 1000)
POD_SHAPES = ((1, 2), (2, 2), (1, 4))
IRREGULAR = ((17, 7, 7), (75, 3, 5), (115, 4, 2), (287, 1, 6), (439, 1, 9))


def scenario_grid(workload: Workload = Workload.GENERAL) -> List[PodSpec]:
    specs = [
        PodSpec(req_cpu=cpu, req_mem=mem, req_pod=pods, workload=workload)
        for pods, (cpu, mem) in itertools.product(POD_COUNTS, POD_SHAPES)
    ]
    specs += [PodSpec(req_cpu=cpu, req_mem=mem, req_pod=pods, workload=workload) for pods, cpu, mem in IRREGULAR]
    return specs

"""
명령 실행 엔진 모듈

simulate / moments / verify / fit / gof / report 명령을 실행하고 산출물과
매니페스트를 출력 디렉토리에 기록합니다.
"""
import os
import traceback
from contextlib import contextmanager
from typing import Any, Callable, Dict, Generator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from svmc.core.config import RunConfig
from svmc.core.context import RunContext, RunManifest
from svmc.core.plugin import create_extractor, create_loader
from svmc.gof.measures import GofReport, descriptive_stats, gof_report
from svmc.gof.report import gof_table, posterior_table, render_text, report_dict
from svmc.inference.sampler import ChainConfig, PosteriorChain, sample_chains
from svmc.inference.summary import posterior_summary, summary_dict
from svmc.loaders.csv import read_csv
from svmc.loaders.json import read_json
from svmc.models.core import ModelKind, ModelParams, SeriesPair
from svmc.models.moments import leadlag, moment_set
from svmc.simulation.oracle import VerifyResult, verify_grid
from svmc.simulation.simulate import simulate_paths
from svmc.utils.logging import get_logger

logger = get_logger()

INGEST_MODES = ("prices", "returns")
ProgressCallback = Callable[[int, int], None]


def ingest(path: str, mode: str = "prices") -> SeriesPair:
    """CSV 파일에서 수익률 시계열 읽기

    Args:
        path: CSV 파일 경로
        mode: "prices" (date,price) 또는 "returns" (date,return 또는 t,r[,h])

    Raises:
        ValueError: 알 수 없는 mode
        IngestError: 자료 오류 (ParseError, NonPositivePrice, NonMonotoneDates, EmptyInput)
    """
    if mode not in INGEST_MODES:
        raise ValueError(f"알 수 없는 입력 모드: {mode}. 사용 가능한 값: {', '.join(INGEST_MODES)}")
    with create_extractor(mode, {"file_path": path}) as extractor:
        return extractor.extract()


def load_fit(fit_dir: str) -> Tuple[PosteriorChain, Optional[np.ndarray]]:
    """fit 출력 디렉토리에서 체인과 잠재 경로 사후 평균을 다시 읽기

    Returns:
        (체인, latent.csv 의 h_mean 또는 None)
    """
    summary_path = os.path.join(fit_dir, "summary.json")
    chain_path = os.path.join(fit_dir, "chain.csv")
    for path in (summary_path, chain_path):
        if not os.path.exists(path):
            raise FileNotFoundError(f"fit 산출물을 찾을 수 없습니다: {path}")

    summary = read_json(summary_path)
    chain_settings = summary.get("chain")
    chain = PosteriorChain.from_frame(
        read_csv(chain_path),
        ModelKind.parse(summary["model"]),
        acceptance_rates=summary.get("acceptance_rates", {}),
        step_sizes=summary.get("step_sizes", {}),
        seed=summary.get("seed"),
        config=ChainConfig(**chain_settings) if chain_settings else None,
    )

    latent_path = os.path.join(fit_dir, "latent.csv")
    h_path = None
    if os.path.exists(latent_path):
        h_path = read_csv(latent_path)["h_mean"].to_numpy(dtype=float)
    return chain, h_path


class Pipeline:
    """명령 실행 클래스

    Args:
        config: 검증된 실행 설정
        out_dir: 산출물 디렉토리
    """

    def __init__(self, config: RunConfig, out_dir: str) -> None:
        self.config = config
        self.out_dir = out_dir
        self.context: Optional[RunContext] = None

    @contextmanager
    def _run_context(
        self,
        command: str,
        seed: Optional[int] = None,
        input_path: Optional[str] = None,
        fit_dirs: Sequence[str] = (),
    ) -> Generator[RunContext, None, None]:
        """실행 컨텍스트 관리

        성공과 실패 모두 매니페스트를 기록하며, 예외는 다시 발생시킵니다.
        """
        os.makedirs(self.out_dir, exist_ok=True)
        self.context = RunContext(
            command=command,
            config=self.config.snapshot(),
            seed=seed,
            input_path=os.path.abspath(input_path) if input_path else None,
            fit_dirs=[os.path.abspath(d) for d in fit_dirs],
        )
        self.context.start()
        self.context.log_event("start", f"{command} 실행 시작")

        try:
            yield self.context
            self.context.complete()
            self.context.log_event("complete", f"{command} 실행 성공")
        except Exception as e:
            self.context.fail(e)
            self.context.log_event(
                "fail", f"{command} 실행 실패: {e}", {"traceback": traceback.format_exc()}
            )
            raise
        finally:
            try:
                path = RunManifest.from_context(self.context).write(self.out_dir)
                logger.debug(f"매니페스트 기록: {path}")
            except Exception as e:
                logger.error(f"매니페스트 기록 중 오류 발생: {e}")

            execution_time = self.context.metrics.get_execution_time()
            if execution_time is not None:
                logger.info(f"{command} 실행 시간: {execution_time:.2f}초")
            logger.info(f"{command} 상태: {self.context.status.value}")

    def _write(self, loader_type: str, name: str, data: Any) -> str:
        path = os.path.join(self.out_dir, name)
        with create_loader(loader_type, {"file_path": path, "if_exists": "replace"}) as loader:
            count = loader.load(data)
        if self.context is not None:
            self.context.add_artifact(name, path)
            self.context.log_event("write", f"{name} 기록 ({count})")
        logger.info(f"산출물 기록: {path}")
        return path

    def _write_text(self, name: str, text: str) -> str:
        path = os.path.join(self.out_dir, name)
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
        if self.context is not None:
            self.context.add_artifact(name, path)
        logger.info(f"산출물 기록: {path}")
        return path

    def simulate(self, params: Optional[ModelParams] = None) -> List[SeriesPair]:
        """경로 시뮬레이션 -> paths.csv (경로가 여럿이면 path 열 추가)"""
        params = params or self.config.model.to_params()
        sim = self.config.simulation.to_sim_config()
        with self._run_context("simulate", seed=sim.seed) as context:
            paths = simulate_paths(params, sim, threads=self.config.threads)
            if len(paths) == 1:
                frame = paths[0].to_frame()
            else:
                frames = []
                for index, pair in enumerate(paths):
                    frame = pair.to_frame()
                    frame.insert(0, "path", index)
                    frames.append(frame)
                frame = pd.concat(frames, ignore_index=True)
            self._write("csv", "paths.csv", frame)
            context.metrics.paths_simulated = len(paths)
        return paths

    def moments(self, params: Optional[ModelParams] = None) -> Dict[str, Any]:
        """닫힌 형태 적률과 선행-후행 프로파일 -> moments.json"""
        params = params or self.config.model.to_params()
        with self._run_context("moments"):
            result = {
                "params": params.to_dict(),
                "moments": moment_set(params).to_dict(),
                "leadlag": leadlag(params, self.config.gof.k_max).to_dict(),
            }
            self._write("json", "moments.json", result)
        return result

    def verify(
        self,
        points: Optional[Sequence[ModelParams]] = None,
        progress: Optional[ProgressCallback] = None,
    ) -> VerifyResult:
        """닫힌 형태 대 몬테카를로 검증 -> verify.json"""
        settings = self.config.verify.to_settings()
        with self._run_context("verify", seed=settings.seed) as context:
            result = verify_grid(points, settings, threads=self.config.threads, progress=progress)
            self._write("json", "verify.json", result.to_dict())
            counts = result.counts
            context.metrics.checks_run = len(result.rows)
            context.metrics.checks_failed = counts["fail"]
        return result

    def fit(self, data_path: str, mode: str = "prices") -> List[PosteriorChain]:
        """사후 표본 추출 -> chain.csv, latent.csv, summary.json

        체인이 여럿이면 두 번째 체인부터 chain_<번호>.csv 로 기록하고
        summary.json 에 R-hat 을 포함합니다.
        """
        kind = self.config.model.kind
        chain_config = self.config.chain.to_chain_config()
        priors = self.config.priors.to_priors()
        with self._run_context("fit", seed=chain_config.seed, input_path=data_path) as context:
            series = ingest(data_path, mode)
            logger.info(f"{kind.label} 적합: 관측 {len(series)}개")
            chains = sample_chains(
                series.returns,
                kind,
                priors,
                chain_config,
                n_chains=self.config.chain.n_chains,
                threads=self.config.threads,
            )
            first = chains[0]
            self._write("csv", "chain.csv", first.to_frame())
            for index, extra in enumerate(chains[1:], start=2):
                self._write("csv", f"chain_{index}.csv", extra.to_frame())
            self._write("csv", "latent.csv", first.latent_summary())
            self._write("json", "summary.json", summary_dict(first, priors, chains[1:]))
            context.metrics.draws_retained = sum(len(c) for c in chains)
        return chains

    def gof(self, data_path: str, fit_dir: str, mode: str = "prices") -> GofReport:
        """적합도 보고서 -> gof.json, gof.txt"""
        with self._run_context("gof", input_path=data_path, fit_dirs=[fit_dir]):
            series = ingest(data_path, mode)
            chain, h_path = load_fit(fit_dir)
            if h_path is None:
                raise FileNotFoundError(f"latent.csv 가 없습니다: {fit_dir}")
            report = gof_report(
                chain, series.returns, self.config.gof.k_max, self.config.gof.lags, h_path=h_path
            )
            self._write("json", "gof.json", report.to_dict())
            self._write_text("gof.txt", render_text(gof_table(report.descriptive, [report])))
        return report

    def report(self, data_path: str, fit_dirs: Sequence[str], mode: str = "prices") -> Dict[str, Any]:
        """여러 적합 결과의 사후 요약 표와 적합도 표 -> report.json, report.txt"""
        if not fit_dirs:
            raise ValueError("적합 결과 디렉토리가 하나 이상 필요합니다")
        with self._run_context("report", input_path=data_path, fit_dirs=fit_dirs):
            series = ingest(data_path, mode)
            data = descriptive_stats(series.returns)
            summaries: Dict[ModelKind, pd.DataFrame] = {}
            reports: List[GofReport] = []
            for fit_dir in fit_dirs:
                chain, h_path = load_fit(fit_dir)
                if h_path is None:
                    raise FileNotFoundError(f"latent.csv 가 없습니다: {fit_dir}")
                if chain.kind in summaries:
                    logger.warning(f"같은 모형의 적합 결과가 중복되어 마지막 것을 사용합니다: {fit_dir}")
                    reports = [r for r in reports if r.kind is not chain.kind]
                summaries[chain.kind] = posterior_summary(chain)
                reports.append(
                    gof_report(
                        chain, series.returns, self.config.gof.k_max, self.config.gof.lags,
                        h_path=h_path,
                    )
                )

            result = report_dict(data, summaries, reports)
            self._write("json", "report.json", result)
            text = render_text(posterior_table(summaries)) + "\n" + render_text(gof_table(data, reports))
            self._write_text("report.txt", text)
        return result


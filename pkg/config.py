"""
Configuration Management
========================

Loads run settings from environment variables and .env files.
"""

import os
from dataclasses import dataclass
from typing import Optional

from dotenv import load_dotenv

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _env_bool(name: str, default: str) -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


@dataclass
class SpinchainConfig:
    """Thermal-entanglement run configuration"""

    # Performance Configuration
    threads: int = 0

    # Output Configuration
    output_dir: str = "figure_output"

    # Analysis Configuration
    t_scan_points: int = 400
    zero_threshold: float = 1e-9
    oracle_stride: int = 97

    # Logging Configuration
    log_level: str = "INFO"
    log_file: Optional[str] = None
    progress: bool = True

    @classmethod
    def from_env(cls, env_file: str = ".env") -> "SpinchainConfig":
        """Load configuration from environment variables"""

        # Variables already in the environment win over the file
        load_dotenv(env_file, override=False)

        try:
            return cls(
                threads=int(os.getenv("SPINCHAIN_THREADS", "0")),
                output_dir=os.getenv("SPINCHAIN_OUTPUT_DIR", "figure_output"),
                t_scan_points=int(os.getenv("SPINCHAIN_T_SCAN_POINTS", "400")),
                zero_threshold=float(os.getenv("SPINCHAIN_ZERO_THRESHOLD", "1e-9")),
                oracle_stride=int(os.getenv("SPINCHAIN_ORACLE_STRIDE", "97")),
                log_level=os.getenv("SPINCHAIN_LOG_LEVEL", "INFO").strip().upper(),
                log_file=os.getenv("SPINCHAIN_LOG_FILE") or None,
                progress=_env_bool("SPINCHAIN_PROGRESS", "true"),
            )
        except ValueError as e:
            raise ValueError(f"Configuration validation failed:\n  {e}")

    @property
    def worker_count(self) -> int:
        """Threads to use; 0 means one per CPU"""
        if self.threads > 0:
            return self.threads
        return os.cpu_count() or 1

    def validate(self) -> bool:
        """Validate configuration"""
        errors = []

        if self.threads < 0:
            errors.append(f"SPINCHAIN_THREADS must be >= 0, got {self.threads}")

        if self.t_scan_points < 2:
            errors.append(f"SPINCHAIN_T_SCAN_POINTS must be >= 2, got {self.t_scan_points}")

        if not self.zero_threshold >= 0.0:
            errors.append(f"SPINCHAIN_ZERO_THRESHOLD must be >= 0, got {self.zero_threshold}")

        if self.oracle_stride < 1:
            errors.append(f"SPINCHAIN_ORACLE_STRIDE must be >= 1, got {self.oracle_stride}")

        if self.log_level not in LOG_LEVELS:
            errors.append(f"Invalid log level: {self.log_level}")

        if not self.output_dir:
            errors.append("SPINCHAIN_OUTPUT_DIR must not be empty")

        if errors:
            raise ValueError("Configuration validation failed:\n  " + "\n  ".join(errors))

        return True

    def __str__(self) -> str:
        """String representation"""
        return f"""
Spin-Chain Entanglement Configuration
{'='*80}
Performance:
  Threads:           {self.threads if self.threads > 0 else f'auto ({self.worker_count})'}

Output:
  Directory:         {self.output_dir}

Analysis:
  T Scan Points:     {self.t_scan_points}
  Zero Threshold:    {self.zero_threshold:g}
  Oracle Stride:     {self.oracle_stride}

Logging:
  Level:             {self.log_level}
  File:              {self.log_file or 'Console only'}
  Progress Bars:     {'Enabled' if self.progress else 'Disabled'}
{'='*80}
"""


def main():
    """Print the effective configuration"""
    try:
        config = SpinchainConfig.from_env()
        config.validate()
        print(config)
    except ValueError as e:
        print(f"✗ Configuration Error: {e}")


if __name__ == "__main__":
    main()

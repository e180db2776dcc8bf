from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="GRMLAB_", env_file=".env")

    # Elementary-term cap for exact coset analysis
    exact_budget: int = Field(default=2**26)
    codeword_limit: int = Field(default=2**20)
    atom_tolerance: float = Field(default=1e-10)
    margin_tolerance: float = Field(default=1e-9)
    log_level: str = Field(default="INFO")
    # HTTP service
    redis_url: str = Field(default="redis://localhost:6379/0")
    app_host: str = Field(default="0.0.0.0")
    app_port: int = Field(default=8000)
    testing: bool = Field(default=False)

    @classmethod
    def for_testing(cls) -> "Settings":
        """Return settings configured for testing environment"""
        return cls(testing=True, redis_url="redis://localhost:6379/1")


def get_settings() -> Settings:
    """Read settings fresh so environment overrides apply per call."""
    return Settings()

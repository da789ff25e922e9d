from .app import SessionConfig, create_app

__all__ = ["SessionConfig", "create_app"]

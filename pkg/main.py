if __name__ == "__main__":
    import uvicorn

    from grmlab.config import get_settings

    settings = get_settings()
    uvicorn.run("grmlab.main:app", host=settings.app_host, port=settings.app_port, reload=True)

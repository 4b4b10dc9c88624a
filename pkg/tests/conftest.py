from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,  # first calls hit jit compilation
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

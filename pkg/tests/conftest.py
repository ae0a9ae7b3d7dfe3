from hypothesis import settings

# deterministic example generation, no wall-clock deadline: the suite must
# behave identically run to run and survive slow machines
settings.register_profile("setfam", deadline=None, derandomize=True)
settings.load_profile("setfam")

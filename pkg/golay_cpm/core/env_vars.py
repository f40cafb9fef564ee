NUM_WORKERS = 'GOLAY_CPM_NUM_WORKERS'
CHUNK_TRIALS = 'GOLAY_CPM_CHUNK_TRIALS'
LOG_LEVEL = 'GOLAY_CPM_LOG_LEVEL'
DEBUG = 'GOLAY_CPM_DEBUG'
SELF_CHECK = 'GOLAY_CPM_SELF_CHECK'

import unitaryscaling.linalg
import unitaryscaling.dynamics
